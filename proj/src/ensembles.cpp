#include "spinw1/ensembles.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace spinw1 {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double von_neumann_entropy(const DenseOperator& rho) {
    Spectrum sp = herm_spectrum(rho);
    double s = 0.0;
    for (long i = 0; i < sp.eigenvalues.size(); ++i) {
        double p = sp.eigenvalues(i);
        if (p > 1e-15) s -= p * std::log(p);
    }
    return std::max(s, 0.0);
}

double relative_entropy(const DenseOperator& rho, const DenseOperator& sigma) {
    if (rho.dim() != sigma.dim())
        throw std::invalid_argument("relative_entropy: dimension mismatch");
    Spectrum sr = herm_spectrum(rho);
    Spectrum ss = herm_spectrum(sigma);

    double tr_rho_log_rho = 0.0;
    for (long i = 0; i < sr.eigenvalues.size(); ++i) {
        double p = sr.eigenvalues(i);
        if (p > 1e-15) tr_rho_log_rho += p * std::log(p);
    }

    double tr_rho_log_sigma = 0.0;
    const double q_tol = 1e-14 * std::max(1.0, ss.eigenvalues.cwiseAbs().maxCoeff());
    for (long j = 0; j < ss.eigenvalues.size(); ++j) {
        double qv = ss.eigenvalues(j);
        auto v = ss.eigenvectors.col(j);
        double mass = (v.adjoint() * rho.mat * v)(0, 0).real();
        if (qv <= q_tol) {
            if (mass > 1e-10) return kInf;  // support(rho) escapes support(sigma)
            continue;
        }
        tr_rho_log_sigma += mass * std::log(qv);
    }
    return std::max(tr_rho_log_rho - tr_rho_log_sigma, 0.0);
}

// classical KL of the diagonals in a joint eigenbasis of two commuting states
static double commuting_relative_entropy(const DenseOperator& rho, const DenseOperator& sigma) {
    Spectrum ss = herm_spectrum(sigma);
    const long d = sigma.dim();
    double kl = 0.0;
    long j = 0;
    while (j < d) {
        long j2 = j;
        while (j2 + 1 < d && std::abs(ss.eigenvalues(j2 + 1) - ss.eigenvalues(j)) <= 1e-10) ++j2;
        const long width = j2 - j + 1;
        const double qv = ss.eigenvalues(j);
        Matrix block(width, width);
        for (long a = 0; a < width; ++a)
            for (long b = 0; b < width; ++b)
                block(a, b) = (ss.eigenvectors.col(j + a).adjoint() * rho.mat *
                               ss.eigenvectors.col(j + b))(0, 0);
        Eigen::SelfAdjointEigenSolver<Matrix> es(block);
        for (long a = 0; a < width; ++a) {
            double p = es.eigenvalues()(a);
            if (p <= 1e-15) continue;
            if (qv <= 1e-15) return kInf;
            kl += p * (std::log(p) - std::log(qv));
        }
        j = j2 + 1;
    }
    return std::max(kl, 0.0);
}

EntropyReport entropies(const DenseOperator& rho, const DenseOperator& sigma, int witness_k) {
    if (rho.dim() != sigma.dim())
        throw std::invalid_argument("entropies: dimension mismatch");
    EntropyReport rep;
    rep.von_neumann = von_neumann_entropy(rho);
    rep.von_neumann_sigma = von_neumann_entropy(sigma);
    rep.relative = relative_entropy(rho, sigma);

    const int n = rho.sites();
    W1Result w1 = w1_primal(rho, sigma, std::min(witness_k, n));
    rep.measured_lb = 0.0;
    if (!w1.heuristic_witness.terms().empty()) {
        DenseOperator hw = assemble(w1.heuristic_witness);
        Spectrum sp = herm_spectrum(hw);
        std::vector<double> w_rho = state_weights(sp, rho);
        std::vector<double> w_sigma = state_weights(sp, sigma);
        double tr_rho_h = 0.0;
        for (long i = 0; i < sp.eigenvalues.size(); ++i)
            tr_rho_h += sp.eigenvalues(i) * w_rho[static_cast<size_t>(i)];
        const double lmax = sp.eigenvalues(0);
        for (int g = 0; g < 16; ++g) {
            double t = std::pow(10.0, -2.0 + 3.0 * g / 15.0);
            double lse = 0.0;  // log Tr sigma e^{tH}, stabilized
            for (long i = 0; i < sp.eigenvalues.size(); ++i)
                lse += std::exp(t * (sp.eigenvalues(i) - lmax)) * w_sigma[static_cast<size_t>(i)];
            double value = t * tr_rho_h - (t * lmax + std::log(lse));
            rep.measured_lb = std::max(rep.measured_lb, value);
        }
    }

    Matrix commutator = rho.mat * sigma.mat - sigma.mat * rho.mat;
    if (max_abs(commutator) <= 1e-10)
        rep.measured_commuting = commuting_relative_entropy(rho, sigma);
    return rep;
}

double tci_f(double w, int k, double A, double d, double xi, double t) {
    if (k < 1 || A <= 0 || d < 1.0 || xi <= 0 || t <= 0)
        throw std::invalid_argument("tci_f: parameters must be positive (d >= 1)");
    if (w < 0) throw std::invalid_argument("tci_f: w must be >= 0");
    if (w == 0.0) return 0.0;
    auto [f, s] = F_and_sstar(k * w);
    if (f + k * s <= 1e-300) return 0.0;
    double bracket = xi / (k * A * A * t) * (k * s + f);
    double power = 2.0 * d / (2.0 * d + 1.0);
    return f / (k * k * A * A * t * std::pow(bracket, power));
}

TciInverse tci_f_inverse(double y, int k, double A, double d, double xi, double t, double w_max) {
    if (y < 0) throw std::invalid_argument("tci_f_inverse: y must be >= 0");
    TciInverse out;
    if (y == 0.0) return out;
    if (tci_f(w_max, k, A, d, xi, t) < y) {
        out.w = w_max;
        out.saturated = true;
        return out;
    }
    double lo = 0.0, hi = w_max;
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        double mid = 0.5 * (lo + hi);
        (tci_f(mid, k, A, d, xi, t) < y ? lo : hi) = mid;
    }
    out.w = 0.5 * (lo + hi);
    return out;
}

double auto_tci_t(double w, int k, double A, double d, double xi, double n_value) {
    const double m = std::pow(n_value, 1.0 / (2.0 * d + 1.0));
    auto rhs = [&](double t) { return m * tci_f(w, k, A, d, xi, t); };
    double lo = 1e-3, hi = 10.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = rhs(x1), f2 = rhs(x2);
    for (int it = 0; it < 120; ++it) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = rhs(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = rhs(x2);
        }
    }
    return 0.5 * (lo + hi);
}

EquivalenceReport equivalence_bound(const DenseOperator& omega, const DenseOperator& rho,
                                    const LocalObservable& h, const Geometry& geom, int k,
                                    double xi, double C, std::optional<double> t) {
    if (omega.dim() != rho.dim())
        throw std::invalid_argument("equivalence_bound: dimension mismatch");
    const int n = geom.n;
    const double m = std::pow(static_cast<double>(n), 1.0 / (2.0 * geom.d + 1.0));

    EquivalenceReport rep;
    rep.entropy_gap = von_neumann_entropy(omega) - von_neumann_entropy(rho);
    rep.relative = relative_entropy(rho, omega);
    rep.c = std::log1p(C);

    DenseOperator h_full = assemble(h);
    rep.energy_residual = std::abs(expectation(rho, h_full) - expectation(omega, h_full));
    rep.energy_valid = rep.energy_residual <= 1e-6 * operator_norm(h_full);

    W1Result w1 = w1_primal(rho, omega, k);
    rep.w = w1.value / n;

    double t_used = t ? *t : auto_tci_t(rep.w, k, geom.A, geom.d, xi, n);
    rep.f_params["k"] = k;
    rep.f_params["A"] = geom.A;
    rep.f_params["d"] = geom.d;
    rep.f_params["xi"] = xi;
    rep.f_params["C"] = C;
    rep.f_params["t"] = t_used;

    double y = (rep.entropy_gap + rep.c) / m;
    if (y < 0) y = 0;  // gap < 0 means the energies differ; flagged via energy_valid
    TciInverse inv = tci_f_inverse(y, k, geom.A, geom.d, xi, t_used);
    rep.bound_on_w = inv.w;
    rep.saturated = inv.saturated;

    // average single-spin marginal channel
    Matrix avg_rho = Matrix::Zero(geom.q, geom.q), avg_omega = Matrix::Zero(geom.q, geom.q);
    for (int x = 0; x < n; ++x) {
        avg_rho += partial_trace(rho, {x}).mat;
        avg_omega += partial_trace(omega, {x}).mat;
    }
    avg_rho /= n;
    avg_omega /= n;
    rep.avg_marginal_halfdist = 0.5 * trace_norm(avg_rho - avg_omega, true);
    rep.marginal_chain_ok = rep.avg_marginal_halfdist <= rep.w + 1e-8;
    return rep;
}

EStarResult e_star_from_spectrum(const RealVector& eigenvalues, double beta, double delta) {
    if (delta <= 0) throw std::invalid_argument("e_star: Delta must be > 0");
    if (beta < 0) throw std::invalid_argument("e_star: beta must be >= 0");
    const double lambda_min = eigenvalues.minCoeff();
    const double lambda_max = eigenvalues.maxCoeff();
    const double origin = lambda_min - 1e-9;
    const long shells = std::max(1L, static_cast<long>(std::ceil((lambda_max - origin) / delta)));

    EStarResult best;
    double best_weight = -1.0;
    for (long nu = 1; nu <= shells; ++nu) {
        double e = origin + static_cast<double>(nu) * delta;
        long count = static_cast<long>(shell_members(eigenvalues, e, delta).size());
        if (count == 0) continue;
        double weight = std::exp(-beta * e) * static_cast<double>(count);
        if (weight > best_weight) {
            best_weight = weight;
            best.E_star = e;
            best.shell_trace = count;
        }
    }
    return best;
}

EStarResult e_star(const LocalObservable& h, double beta, double delta) {
    Spectrum sp = herm_spectrum(assemble(h));
    return e_star_from_spectrum(sp.eigenvalues, beta, delta);
}

std::vector<EnsembleRow> ensemble_experiment(
    const std::function<LocalObservable(int)>& family, double beta,
    const std::function<double(int, const DenseOperator&)>& delta_rule,
    const std::vector<int>& n_values, int k) {
    std::vector<EnsembleRow> rows;
    for (int n : n_values) {
        LocalObservable h = family(n);
        Geometry geom = Geometry::chain(n, h.q());
        DenseOperator h_full = assemble(h);
        Spectrum sp = herm_spectrum(h_full);

        EnsembleRow row;
        row.n = n;
        row.beta = beta;
        row.local_norm = h.local_norm();
        row.spectral_width = sp.eigenvalues(0) - sp.eigenvalues(sp.eigenvalues.size() - 1);
        row.delta = delta_rule(n, h_full);

        EStarResult es = e_star_from_spectrum(sp.eigenvalues, beta, row.delta);
        row.E_star = es.E_star;
        row.shell_dim = es.shell_trace;
        if (es.shell_trace == 0) {
            row.shell_empty = true;
            rows.push_back(row);
            continue;
        }

        DenseOperator omega = gibbs_state(h_full, beta);
        DenseOperator micro = microcanonical_state(h_full, es.E_star, row.delta);

        W1Result w1 = w1_primal(micro, omega, k);
        row.w1_value = w1.value;
        row.w = w1.value / n;

        EntropyReport ent = entropies(micro, omega, k);
        row.S_gibbs = ent.von_neumann_sigma;
        row.S_micro = ent.von_neumann;
        row.relative = ent.relative;
        row.measured_lb = ent.measured_lb;
        row.proof_bound = std::log(n * h.local_norm() / row.delta + 1.0) + beta * row.delta;
        row.energy_gibbs = expectation(omega, h_full);
        row.energy_micro = expectation(micro, h_full);

        CorrelationFit fit = estimate_correlation_length(omega, geom, single_site_probes(h.q()));
        row.xi_fit = fit.xi;
        row.C_fit = fit.C;
        row.fit_residual = fit.residual;

        if (std::isfinite(fit.xi) && fit.xi > 0) {
            row.t_used = auto_tci_t(row.w, k, geom.A, geom.d, fit.xi, n);
            double m = std::pow(static_cast<double>(n), 1.0 / (2.0 * geom.d + 1.0));
            row.tci_rhs = m * tci_f(row.w, k, geom.A, geom.d, fit.xi, row.t_used) - std::log1p(fit.C);
            double y = std::max(0.0, (row.S_gibbs - row.S_micro + std::log1p(fit.C)) / m);
            TciInverse inv = tci_f_inverse(y, k, geom.A, geom.d, fit.xi, row.t_used);
            row.bound_on_w = inv.w;
            row.tci_saturated = inv.saturated;
        } else {
            row.t_used = 0.0;
            row.tci_rhs = -std::log1p(fit.C);
            row.bound_on_w = 2.0;
            row.tci_saturated = true;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace spinw1
