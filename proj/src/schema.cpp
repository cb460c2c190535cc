#include "spinw1/schema.hpp"

#include <cmath>

namespace spinw1 {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw ValidationError(field + ": " + msg);
}

double require_number(const json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
}

int require_int(const json& j, const std::string& field) {
    if (!j.is_number_integer()) fail(field, "expected an integer");
    return j.get<int>();
}

Matrix parse_matrix(const json& j, long dim, const std::string& field) {
    if (!j.is_array() || static_cast<long>(j.size()) != dim * dim)
        fail(field, "expected " + std::to_string(dim * dim) + " row-major [re, im] entries");
    Matrix m(dim, dim);
    for (long idx = 0; idx < dim * dim; ++idx) {
        const json& e = j[static_cast<size_t>(idx)];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            fail(field + "[" + std::to_string(idx) + "]", "expected an [re, im] pair");
        m(idx / dim, idx % dim) = Complex(e[0].get<double>(), e[1].get<double>());
    }
    return m;
}

// One schema term -> (sites, matrix) with the identity component split off.
// Empty `sites` after identity-dropping means a pure offset contribution.
struct ParsedTerm {
    std::vector<int> sites;
    Matrix h;
    double offset = 0.0;
};

ParsedTerm parse_term(const json& t, int n, int q, const std::string& field) {
    if (!t.is_object()) fail(field, "expected an object");
    if (!t.contains("sites")) fail(field + ".sites", "missing");
    const json& sj = t["sites"];
    if (!sj.is_array() || sj.empty()) fail(field + ".sites", "expected a nonempty site list");
    std::vector<int> sites;
    for (size_t i = 0; i < sj.size(); ++i) {
        int s = require_int(sj[i], field + ".sites[" + std::to_string(i) + "]");
        if (s < 0 || s >= n)
            fail(field + ".sites[" + std::to_string(i) + "]",
                 "site " + std::to_string(s) + " out of range [0," + std::to_string(n) + ")");
        if (std::find(sites.begin(), sites.end(), s) != sites.end())
            fail(field + ".sites", "repeated site " + std::to_string(s));
        sites.push_back(s);
    }
    double coeff = 1.0;
    if (t.contains("coeff")) coeff = require_number(t["coeff"], field + ".coeff");

    const bool has_pauli = t.contains("pauli");
    const bool has_matrix = t.contains("matrix");
    if (has_pauli == has_matrix) fail(field, "expected exactly one of 'pauli' or 'matrix'");

    ParsedTerm out;
    if (has_pauli) {
        if (q != 2) fail(field + ".pauli", "Pauli strings require q = 2");
        if (!t["pauli"].is_string()) fail(field + ".pauli", "expected a string");
        std::string word = t["pauli"].get<std::string>();
        if (word.size() != sites.size())
            fail(field + ".pauli", "length " + std::to_string(word.size()) + " != number of sites");
        Matrix h = Matrix::Identity(1, 1);
        for (size_t i = 0; i < word.size(); ++i) {
            char letter = word[i];
            if (letter == 'I') continue;
            Matrix p;
            try {
                p = pauli_matrix(letter);
            } catch (const std::invalid_argument& e) {
                fail(field + ".pauli", e.what());
            }
            out.sites.push_back(sites[i]);
            h = kron(h, p);
        }
        if (out.sites.empty()) {
            out.offset = coeff;
            return out;
        }
        out.h = coeff * h;
        return out;
    }

    long dim = ipow(q, static_cast<int>(sites.size()));
    Matrix m = parse_matrix(t["matrix"], dim, field + ".matrix");
    if (max_abs(m - m.adjoint()) > 1e-12) fail(field + ".matrix", "matrix is not Hermitian");
    double idpart = m.trace().real() / static_cast<double>(dim);
    out.offset = coeff * idpart;
    out.sites = sites;
    out.h = coeff * (m - idpart * Matrix::Identity(dim, dim));
    return out;
}

}  // namespace

LocalObservable parse_observable(const json& terms, int n, int q, const std::string& field) {
    if (!terms.is_array()) fail(field, "expected an array of terms");
    std::vector<ObservableTerm> parsed;
    double offset = 0.0;
    for (size_t i = 0; i < terms.size(); ++i) {
        ParsedTerm pt = parse_term(terms[i], n, q, field + "[" + std::to_string(i) + "]");
        offset += pt.offset;
        if (!pt.sites.empty()) parsed.push_back(ObservableTerm{std::move(pt.sites), std::move(pt.h)});
    }
    try {
        return LocalObservable(n, q, std::move(parsed), offset);
    } catch (const std::invalid_argument& e) {
        fail(field, e.what());
    }
}

StateRequest parse_state_spec(const json& state, int n, int q,
                              const std::optional<LocalObservable>& hamiltonian,
                              const std::string& field) {
    if (!state.is_object() || !state.contains("type")) fail(field + ".type", "missing");
    if (!state["type"].is_string()) fail(field + ".type", "expected a string");
    std::string type = state["type"].get<std::string>();

    auto need_hamiltonian = [&]() -> const LocalObservable& {
        if (!hamiltonian) fail(field, "state type '" + type + "' requires a hamiltonian");
        return *hamiltonian;
    };

    StateRequest req;
    if (type == "product") {
        if (!state.contains("factors") || !state["factors"].is_array())
            fail(field + ".factors", "expected an array of matrices");
        const json& fj = state["factors"];
        if (static_cast<int>(fj.size()) != n)
            fail(field + ".factors", "expected " + std::to_string(n) + " factors");
        std::vector<Matrix> factors;
        for (size_t i = 0; i < fj.size(); ++i)
            factors.push_back(parse_matrix(fj[i], q, field + ".factors[" + std::to_string(i) + "]"));
        req.spec = StateSpec::product(std::move(factors));
    } else if (type == "basis") {
        if (!state.contains("string") || !state["string"].is_string())
            fail(field + ".string", "expected a digit string");
        std::string digits = state["string"].get<std::string>();
        if (static_cast<int>(digits.size()) != n)
            fail(field + ".string", "expected " + std::to_string(n) + " digits");
        std::vector<Matrix> factors;
        for (char c : digits) {
            int digit = c - '0';
            if (digit < 0 || digit >= q) fail(field + ".string", "digit out of range for q");
            Matrix f = Matrix::Zero(q, q);
            f(digit, digit) = 1.0;
            factors.push_back(std::move(f));
        }
        req.spec = StateSpec::product(std::move(factors));
    } else if (type == "maximally_mixed") {
        std::vector<Matrix> factors(static_cast<size_t>(n),
                                    Matrix::Identity(q, q) / static_cast<double>(q));
        req.spec = StateSpec::product(std::move(factors));
    } else if (type == "gibbs" || type == "dephased_gibbs") {
        if (!state.contains("beta")) fail(field + ".beta", "missing");
        double beta = require_number(state["beta"], field + ".beta");
        if (beta < 0) fail(field + ".beta", "must be >= 0");
        req.spec = StateSpec::gibbs(need_hamiltonian(), beta);
        req.dephase = (type == "dephased_gibbs");
    } else if (type == "microcanonical") {
        if (!state.contains("E")) fail(field + ".E", "missing");
        if (!state.contains("Delta")) fail(field + ".Delta", "missing");
        double e = require_number(state["E"], field + ".E");
        double delta = require_number(state["Delta"], field + ".Delta");
        if (delta <= 0) fail(field + ".Delta", "must be > 0");
        req.spec = StateSpec::microcanonical(need_hamiltonian(), e, delta);
    } else if (type == "explicit") {
        if (!state.contains("matrix")) fail(field + ".matrix", "missing");
        req.spec = StateSpec::explicit_state(parse_matrix(state["matrix"], ipow(q, n), field + ".matrix"));
    } else {
        fail(field + ".type", "unknown state type '" + type + "'");
    }
    return req;
}

Geometry parse_geometry(const json& geometry, int n, int q) {
    std::string type = "chain";
    json g = geometry;
    if (!g.is_null()) {
        if (!g.is_object()) fail("geometry", "expected an object");
        if (g.contains("type")) {
            if (!g["type"].is_string()) fail("geometry.type", "expected a string");
            type = g["type"].get<std::string>();
        }
    }
    std::optional<double> a;
    if (g.is_object() && g.contains("A")) a = require_number(g["A"], "geometry.A");
    try {
        if (type == "chain") {
            double d = g.is_object() && g.contains("d") ? require_number(g["d"], "geometry.d") : 1.0;
            return Geometry::chain(n, q, d, a);
        }
        if (type == "grid2d") {
            if (!g.contains("nx") || !g.contains("ny"))
                fail("geometry", "grid2d requires nx and ny");
            int nx = require_int(g["nx"], "geometry.nx");
            int ny = require_int(g["ny"], "geometry.ny");
            if (nx * ny != n) fail("geometry", "nx*ny != n");
            double d = g.contains("d") ? require_number(g["d"], "geometry.d") : 2.0;
            return Geometry::grid2d(nx, ny, q, d, a);
        }
        if (type == "matrix") {
            if (!g.contains("dist")) fail("geometry.dist", "missing");
            const json& dj = g["dist"];
            if (!dj.is_array() || static_cast<int>(dj.size()) != n)
                fail("geometry.dist", "expected " + std::to_string(n) + " rows");
            RealMatrix dist(n, n);
            for (int i = 0; i < n; ++i) {
                const json& row = dj[static_cast<size_t>(i)];
                if (!row.is_array() || static_cast<int>(row.size()) != n)
                    fail("geometry.dist[" + std::to_string(i) + "]", "expected " + std::to_string(n) + " entries");
                for (int j = 0; j < n; ++j)
                    dist(i, j) = require_number(row[static_cast<size_t>(j)],
                                                "geometry.dist[" + std::to_string(i) + "]");
            }
            double d = g.contains("d") ? require_number(g["d"], "geometry.d") : 1.0;
            return Geometry::from_matrix(q, std::move(dist), d, a);
        }
    } catch (const std::invalid_argument& e) {
        fail("geometry", e.what());
    }
    fail("geometry.type", "unknown geometry type '" + type + "'");
}

LocalObservable FamilySpec::instantiate(int n) const {
    std::vector<ObservableTerm> terms;
    for (int i = 0; i + 1 < n; ++i)
        for (const auto& t : bond_terms) terms.push_back(ObservableTerm{{i, i + 1}, t.h});
    for (int i = 0; i < n; ++i)
        for (const auto& t : site_terms) terms.push_back(ObservableTerm{{i}, t.h});
    return LocalObservable(n, q, std::move(terms));
}

FamilySpec parse_family(const json& family, int q) {
    if (!family.is_object()) fail("family", "expected an object");
    std::string type = family.contains("type") && family["type"].is_string()
                           ? family["type"].get<std::string>()
                           : "chain_template";
    if (type != "chain_template") fail("family.type", "unknown family type '" + type + "'");

    FamilySpec spec;
    spec.q = q;
    auto parse_side = [&](const char* key, int nsites, std::vector<ObservableTerm>& out) {
        if (!family.contains(key)) return;
        // reuse the term schema on a template of nsites sites
        json tpl = family[key];
        if (!tpl.is_array()) fail(std::string("family.") + key, "expected an array of terms");
        for (size_t i = 0; i < tpl.size(); ++i) {
            json t = tpl[static_cast<size_t>(i)];
            if (t.is_object() && !t.contains("sites")) {
                t["sites"] = nsites == 2 ? json::array({0, 1}) : json::array({0});
            }
            LocalObservable one = parse_observable(json::array({t}), nsites, q,
                                                   std::string("family.") + key + "[" +
                                                       std::to_string(i) + "]");
            for (const auto& term : one.terms()) out.push_back(term);
        }
    };
    parse_side("bond", 2, spec.bond_terms);
    parse_side("site", 1, spec.site_terms);
    if (spec.bond_terms.empty() && spec.site_terms.empty())
        fail("family", "no bond or site terms given");
    return spec;
}

SystemDescription parse_system(const json& doc) {
    if (!doc.is_object()) fail("input", "expected a JSON object");
    if (!doc.contains("n")) fail("n", "missing");
    if (!doc.contains("q")) fail("q", "missing");
    SystemDescription sys;
    sys.n = require_int(doc["n"], "n");
    sys.q = require_int(doc["q"], "q");
    if (sys.n < 1) fail("n", "must be >= 1");
    if (sys.q < 2) fail("q", "must be >= 2");
    sys.geometry = parse_geometry(doc.contains("geometry") ? doc["geometry"] : json(), sys.n, sys.q);
    if (doc.contains("hamiltonian"))
        sys.hamiltonian = parse_observable(doc["hamiltonian"], sys.n, sys.q);
    if (doc.contains("state"))
        sys.state = parse_state_spec(doc["state"], sys.n, sys.q, sys.hamiltonian, "state");
    if (doc.contains("state2"))
        sys.state2 = parse_state_spec(doc["state2"], sys.n, sys.q, sys.hamiltonian, "state2");
    if (doc.contains("family")) sys.family = parse_family(doc["family"], sys.q);
    if (doc.contains("params")) {
        if (!doc["params"].is_object()) fail("params", "expected an object");
        sys.params = doc["params"];
    }
    return sys;
}

}  // namespace spinw1
