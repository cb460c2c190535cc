#include "spinw1/io.hpp"

#include "spinw1/ensembles.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace spinw1 {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_grid(const std::string& grid) {
    double start = 0, stop = 0;
    long steps = 0;
    if (std::sscanf(grid.c_str(), "%lf:%lf:%ld", &start, &stop, &steps) != 3 || steps < 1)
        throw ValidationError("a-grid: expected start:stop:steps with steps >= 1, got '" + grid + "'");
    std::vector<double> out;
    for (long j = 0; j < steps; ++j)
        out.push_back(steps == 1 ? start : start + (stop - start) * static_cast<double>(j) /
                                               static_cast<double>(steps - 1));
    return out;
}

namespace {

// JSON writer with doubles pinned at 17 significant digits. Non-finite values
// are emitted as quoted strings.
void dump_json(const ordered_json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::null: out += "null"; break;
        case json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
        case json::value_t::number_integer:
        case json::value_t::number_unsigned: out += j.dump(); break;
        case json::value_t::number_float: {
            double v = j.get<double>();
            if (std::isfinite(v))
                out += format_double(v);
            else
                out += v > 0 ? "\"inf\"" : (v < 0 ? "\"-inf\"" : "\"nan\"");
            break;
        }
        case json::value_t::string: out += json(j.get<std::string>()).dump(); break;
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += ',';
                first = false;
                dump_json(e, out);
            }
            out += ']';
            break;
        }
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                dump_json(it.value(), out);
            }
            out += '}';
            break;
        }
        default: out += "null"; break;
    }
}

std::string serialize(const ordered_json& j) {
    std::string out;
    dump_json(j, out);
    out += '\n';
    return out;
}

std::string csv_field(double v) {
    return std::isfinite(v) ? format_double(v) : (v > 0 ? "inf" : (v < 0 ? "-inf" : "nan"));
}

json load_input(const RunConfig& cfg) {
    if (cfg.input_path.empty()) throw ValidationError("input: --input file required");
    std::ifstream in(cfg.input_path);
    if (!in) throw ValidationError("input: cannot read file '" + cfg.input_path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("input: malformed JSON: " + std::string(e.what()));
    }
}

DenseOperator realize(const StateRequest& req, const Geometry& geom) {
    DenseOperator rho = build_state(req.spec, geom);
    return req.dephase ? dephase_computational(rho) : rho;
}

const char* status_name(W1Result::SolverStatus s) {
    switch (s) {
        case W1Result::SolverStatus::Optimal: return "optimal";
        case W1Result::SolverStatus::IterationLimit: return "iteration-limit";
        default: return "infeasible-report";
    }
}

RunResult run_w1(const RunConfig& cfg) {
    SystemDescription sys = parse_system(load_input(cfg));
    if (!sys.state) throw ValidationError("state: missing");
    if (!sys.state2) throw ValidationError("state2: missing (the w1 command compares two states)");
    DenseOperator rho = realize(*sys.state, sys.geometry);
    DenseOperator sigma = realize(*sys.state2, sys.geometry);
    W1Result res = w1_primal(rho, sigma, cfg.k);

    RunResult out;
    if (cfg.format == "csv") {
        std::string s = "value,lower_bound,upper_bound,status,witness_value";
        for (int x = 0; x < sys.n; ++x) s += ",a_" + std::to_string(x);
        s += "\n";
        s += csv_field(res.value) + "," + csv_field(res.lower_bound) + "," +
             csv_field(res.upper_bound) + "," + status_name(res.status) + "," +
             csv_field(res.witness_value);
        for (double a : res.site_weights) s += "," + csv_field(a);
        s += "\n";
        out.artifact = s;
        return out;
    }
    ordered_json doc;
    doc["command"] = "w1";
    doc["n"] = sys.n;
    doc["q"] = sys.q;
    doc["k"] = cfg.k;
    doc["value"] = res.value;
    doc["site_weights"] = res.site_weights;
    doc["lower_bound"] = res.lower_bound;
    doc["upper_bound"] = res.upper_bound;
    doc["solver_status"] = status_name(res.status);
    doc["active_regions"] = res.active_regions;
    doc["witness_value"] = res.witness_value;
    out.artifact = serialize(doc);
    return out;
}

RunResult run_conc_bound(const RunConfig& cfg) {
    SystemDescription sys = parse_system(load_input(cfg));
    if (!sys.hamiltonian) throw ValidationError("hamiltonian: missing");
    const LocalObservable& h = *sys.hamiltonian;
    const int k = std::max(h.k(), 1);
    const double local_norm = h.local_norm();
    if (local_norm <= 0) throw ValidationError("hamiltonian: local norm is zero");

    ordered_json doc;
    doc["command"] = "conc-bound";
    doc["n"] = sys.n;
    doc["k"] = k;
    doc["local_norm"] = local_norm;

    bool correlated = sys.params.contains("correlated");
    double xi = 0, c_const = 0;
    if (correlated) {
        const json& cj = sys.params["correlated"];
        if (!cj.contains("xi") || !cj.contains("C"))
            throw ValidationError("params.correlated: requires xi and C");
        xi = cj["xi"].get<double>();
        c_const = cj["C"].get<double>();
        doc["xi"] = xi;
        doc["C"] = c_const;
        doc["C_source"] = "user";
    }

    if (sys.state && sys.state->spec.kind == StateSpec::Kind::Product && !sys.state->dephase) {
        BoundReport mgf = mgf_bound_product(h, sys.state->spec);
        doc["mgf_termwise_log"] = mgf.params.at("termwise_log");
        doc["mgf_klocal_log"] = mgf.params.at("klocal_log");
        doc["mean"] = mgf.params.at("mean");
        if (correlated && sys.params["correlated"].contains("l")) {
            double l = sys.params["correlated"]["l"].get<double>();
            BoundReport mc =
                mgf_bound_correlated(h, sys.geometry, xi, c_const, l, mgf.params.at("mean"));
            doc["mgf_correlated_log"] = mc.log_value;
            doc["mgf_correlated_piece1_log"] = mc.params.at("piece1_log");
            doc["mgf_correlated_piece2_log"] = mc.params.at("piece2_log");
        }
    }

    ordered_json rows = ordered_json::array();
    std::string csv = "a,x,tail_optimal,tail_explicit";
    if (correlated) csv += ",tail_correlated,tail_correlated_explicit,l";
    csv += "\n";
    for (double a : parse_grid(cfg.a_grid)) {
        if (a <= 0) throw ValidationError("a-grid: deviations must be positive");
        BoundReport opt = tail_bound_product(a, sys.n, k, local_norm, false);
        BoundReport expl = tail_bound_product(a, sys.n, k, local_norm, true);
        ordered_json row;
        row["a"] = a;
        row["x"] = opt.params.at("x");
        row["s_star"] = opt.params.at("s");
        row["F"] = opt.params.at("F");
        row["tail_optimal"] = opt.value;
        row["tail_explicit"] = expl.value;
        csv += csv_field(a) + "," + csv_field(opt.params.at("x")) + "," + csv_field(opt.value) +
               "," + csv_field(expl.value);
        if (correlated) {
            BoundReport copt = tail_bound_correlated(a, sys.n, k, local_norm, sys.geometry.A,
                                                     sys.geometry.d, xi, c_const, false);
            BoundReport cexp = tail_bound_correlated(a, sys.n, k, local_norm, sys.geometry.A,
                                                     sys.geometry.d, xi, c_const, true);
            row["tail_correlated"] = copt.value;
            row["tail_correlated_explicit"] = cexp.value;
            row["l"] = copt.params.at("l");
            row["vacuous"] = copt.vacuous;
            csv += "," + csv_field(copt.value) + "," + csv_field(cexp.value) + "," +
                   csv_field(copt.params.at("l"));
        }
        csv += "\n";
        rows.push_back(row);
    }
    doc["rows"] = rows;

    RunResult out;
    out.artifact = cfg.format == "csv" ? csv : serialize(doc);
    return out;
}

RunResult run_conc_verify(const RunConfig& cfg) {
    std::vector<FuzzRow> rows = concentration_fuzz(cfg.seed, static_cast<int>(cfg.instances),
                                                   parse_grid(cfg.a_grid), cfg.tol, 1e-9);
    long violations = 0;
    for (const auto& r : rows)
        if (!r.tail_ok || !r.mgf_ok) ++violations;

    RunResult out;
    out.exit_code = violations > 0 ? 2 : 0;
    if (cfg.format == "csv") {
        std::string csv =
            "instance,n,k,local_norm,a,exact_tail,tail_optimal,tail_explicit,ok_tail,"
            "log_exact_mgf,log_mgf_termwise,log_mgf_klocal,ok_mgf\n";
        for (const auto& r : rows) {
            csv += std::to_string(r.instance) + "," + std::to_string(r.n) + "," +
                   std::to_string(r.k) + "," + csv_field(r.local_norm) + "," + csv_field(r.a) +
                   "," + csv_field(r.exact_tail_value) + "," + csv_field(r.tail_optimal) + "," +
                   csv_field(r.tail_explicit) + "," + (r.tail_ok ? "1" : "0") + "," +
                   csv_field(r.log_exact_mgf) + "," + csv_field(r.log_mgf_termwise) + "," +
                   csv_field(r.log_mgf_klocal) + "," + (r.mgf_ok ? "1" : "0") + "\n";
        }
        out.artifact = csv;
        return out;
    }
    ordered_json doc;
    doc["command"] = "conc-verify";
    doc["seed"] = cfg.seed;
    doc["instances"] = cfg.instances;
    doc["violations"] = violations;
    ordered_json jrows = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json row;
        row["instance"] = r.instance;
        row["n"] = r.n;
        row["k"] = r.k;
        row["local_norm"] = r.local_norm;
        row["a"] = r.a;
        row["exact_tail"] = r.exact_tail_value;
        row["tail_optimal"] = r.tail_optimal;
        row["tail_explicit"] = r.tail_explicit;
        row["ok_tail"] = r.tail_ok;
        row["log_exact_mgf"] = r.log_exact_mgf;
        row["log_mgf_termwise"] = r.log_mgf_termwise;
        row["log_mgf_klocal"] = r.log_mgf_klocal;
        row["ok_mgf"] = r.mgf_ok;
        jrows.push_back(row);
    }
    doc["rows"] = jrows;
    out.artifact = serialize(doc);
    return out;
}

RunResult run_corr_length(const RunConfig& cfg) {
    SystemDescription sys = parse_system(load_input(cfg));
    if (!sys.state) throw ValidationError("state: missing");
    DenseOperator rho = realize(*sys.state, sys.geometry);

    RunResult out;
    ordered_json doc;
    doc["command"] = "corr-length";
    try {
        CorrelationFit fit = estimate_correlation_length(rho, sys.geometry, single_site_probes(sys.q));
        doc["C"] = fit.C;
        doc["xi"] = fit.xi;
        doc["residual"] = fit.residual;
        doc["C_source"] = "fit";
        ordered_json samples = ordered_json::array();
        for (const auto& [dist, cov] : fit.samples) {
            ordered_json s;
            s["distance"] = dist;
            s["covariance"] = cov;
            samples.push_back(s);
        }
        doc["samples"] = samples;
        if (cfg.format == "csv") {
            std::string csv = "distance,covariance\n";
            for (const auto& [dist, cov] : fit.samples)
                csv += csv_field(dist) + "," + csv_field(cov) + "\n";
            out.artifact = csv;
            return out;
        }
    } catch (const FitUnderdetermined& e) {
        doc["error"] = "fit-underdetermined";
        ordered_json samples = ordered_json::array();
        for (const auto& [dist, cov] : e.samples) {
            ordered_json s;
            s["distance"] = dist;
            s["covariance"] = cov;
            samples.push_back(s);
        }
        doc["samples"] = samples;
        out.exit_code = 1;
    }
    out.artifact = serialize(doc);
    return out;
}

RunResult run_ensembles(const RunConfig& cfg) {
    SystemDescription sys = parse_system(load_input(cfg));
    if (!sys.family) throw ValidationError("family: missing (the ensembles command scans n)");
    std::vector<int> n_values = {4, 6, 8, 10};
    if (sys.params.contains("n_values")) {
        n_values.clear();
        for (const auto& v : sys.params["n_values"]) n_values.push_back(v.get<int>());
    }
    double delta_fraction = 0.25;
    if (sys.params.contains("delta_fraction"))
        delta_fraction = sys.params["delta_fraction"].get<double>();

    FamilySpec family = *sys.family;
    auto family_fn = [&family](int n) { return family.instantiate(n); };
    auto delta_rule = [&](int, const DenseOperator& h_full) {
        return cfg.delta > 0 ? cfg.delta : delta_fraction * operator_norm(h_full);
    };
    std::vector<EnsembleRow> rows = ensemble_experiment(family_fn, cfg.beta, delta_rule, n_values, cfg.k);

    long violations = 0;
    for (const auto& r : rows)
        if (!r.shell_empty && r.relative > r.proof_bound + 1e-8) ++violations;

    RunResult out;
    out.exit_code = violations > 0 ? 2 : 0;
    if (cfg.format == "csv") {
        std::string csv =
            "n,beta,Delta,E_star,shell_dim,local_norm,spectral_width,w1,w,S_gibbs,S_micro,"
            "relative,proof_bound,measured_lb,energy_gibbs,energy_micro,xi_fit,C_fit,"
            "fit_residual,t_used,tci_rhs,bound_on_w\n";
        for (const auto& r : rows) {
            if (r.shell_empty) continue;
            csv += std::to_string(r.n) + "," + csv_field(r.beta) + "," + csv_field(r.delta) + "," +
                   csv_field(r.E_star) + "," + std::to_string(r.shell_dim) + "," +
                   csv_field(r.local_norm) + "," + csv_field(r.spectral_width) + "," +
                   csv_field(r.w1_value) + "," + csv_field(r.w) + "," + csv_field(r.S_gibbs) + "," +
                   csv_field(r.S_micro) + "," + csv_field(r.relative) + "," +
                   csv_field(r.proof_bound) + "," + csv_field(r.measured_lb) + "," +
                   csv_field(r.energy_gibbs) + "," + csv_field(r.energy_micro) + "," +
                   csv_field(r.xi_fit) + "," + csv_field(r.C_fit) + "," +
                   csv_field(r.fit_residual) + "," + csv_field(r.t_used) + "," +
                   csv_field(r.tci_rhs) + "," + csv_field(r.bound_on_w) + "\n";
        }
        out.artifact = csv;
        return out;
    }
    ordered_json doc;
    doc["command"] = "ensembles";
    doc["beta"] = cfg.beta;
    doc["k"] = cfg.k;
    doc["correlation_source"] = "fit";
    doc["c_definition"] = "log(C+1)";
    doc["violations"] = violations;
    ordered_json jrows = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json row;
        row["n"] = r.n;
        row["shell_empty"] = r.shell_empty;
        if (r.shell_empty) {
            jrows.push_back(row);
            continue;
        }
        row["Delta"] = r.delta;
        row["E_star"] = r.E_star;
        row["shell_dim"] = r.shell_dim;
        row["local_norm"] = r.local_norm;
        row["spectral_width"] = r.spectral_width;
        row["w1"] = r.w1_value;
        row["w"] = r.w;
        row["S_gibbs"] = r.S_gibbs;
        row["S_micro"] = r.S_micro;
        row["relative"] = r.relative;
        row["proof_bound"] = r.proof_bound;
        row["measured_lb"] = r.measured_lb;
        row["energy_gibbs"] = r.energy_gibbs;
        row["energy_micro"] = r.energy_micro;
        row["xi_fit"] = r.xi_fit;
        row["C_fit"] = r.C_fit;
        row["fit_residual"] = r.fit_residual;
        row["t_used"] = r.t_used;
        row["tci_rhs"] = r.tci_rhs;
        row["bound_on_w"] = r.bound_on_w;
        row["tci_saturated"] = r.tci_saturated;
        jrows.push_back(row);
    }
    doc["rows"] = jrows;
    out.artifact = serialize(doc);
    return out;
}

}  // namespace

RunResult run_to_string(const RunConfig& cfg) {
    if (cfg.k < 1) throw ValidationError("k: must be >= 1");
    if (cfg.command == "w1") return run_w1(cfg);
    if (cfg.command == "conc-bound") return run_conc_bound(cfg);
    if (cfg.command == "conc-verify") return run_conc_verify(cfg);
    if (cfg.command == "corr-length") return run_corr_length(cfg);
    if (cfg.command == "ensembles") return run_ensembles(cfg);
    throw ValidationError("command: unknown command '" + cfg.command + "'");
}

int run_command(const RunConfig& cfg) {
    RunResult res = run_to_string(cfg);
    if (cfg.out_path.empty()) {
        std::cout << res.artifact;
    } else {
        std::ofstream out(cfg.out_path, std::ios::binary);
        if (!out) throw ValidationError("out: cannot write file '" + cfg.out_path + "'");
        out << res.artifact;
    }
    return res.exit_code;
}

}  // namespace spinw1
