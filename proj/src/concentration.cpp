#include "spinw1/concentration.hpp"

#include "spinw1/random.hpp"

#include <cmath>
#include <limits>

namespace spinw1 {

FResult F_and_sstar(double x) {
    if (x < 0) throw std::invalid_argument("F_and_sstar: x must be >= 0");
    if (x == 0.0) return {0.0, 0.0};

    auto g = [x](double s) { return std::expm1(s) * (s + 1.0) - x; };
    double lo = 0.0;
    double hi = 1.0 + std::log1p(x);
    while (g(hi) < 0.0) hi *= 1.5;  // analytic bracket; loop only absorbs rounding

    double s = std::log1p(x);
    for (int it = 0; it < 200; ++it) {
        double gs = g(s);
        if (std::abs(gs) <= 1e-12 * (1.0 + x)) break;
        if (gs < 0.0)
            lo = s;
        else
            hi = s;
        double gp = std::exp(s) * (s + 2.0) - 1.0;
        double next = s - gs / gp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        s = next;
    }
    double f = s * (x - std::expm1(s) + s / 2.0);
    return {f, s};
}

double F_tilde(double x) {
    if (x < 0) throw std::invalid_argument("F_tilde: x must be >= 0");
    double l = std::log1p(x);
    return 0.5 * l * l;
}

static double log_sum_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

// <H> and the centered term norms under a validated product state.
static std::pair<double, std::vector<double>> product_mean_and_centered_norms(
    const LocalObservable& h, const std::vector<Matrix>& factors) {
    double mean = h.offset();
    std::vector<double> centered;
    for (const auto& t : h.terms()) {
        Matrix marginal = Matrix::Identity(1, 1);
        for (int site : t.sites) marginal = kron(marginal, factors[static_cast<size_t>(site)]);
        double e = (marginal * t.h).trace().real();
        mean += e;
        Matrix c = t.h - e * Matrix::Identity(t.h.rows(), t.h.cols());
        centered.push_back(operator_norm(c, true));
    }
    return {mean, std::move(centered)};
}

BoundReport mgf_bound_product(const LocalObservable& h, const StateSpec& omega) {
    if (omega.kind != StateSpec::Kind::Product)
        throw std::invalid_argument("mgf_bound_product: product state required");
    if (static_cast<int>(omega.factors.size()) != h.n())
        throw std::invalid_argument("mgf_bound_product: factor count mismatch");

    std::vector<Matrix> factors;
    for (const auto& f : omega.factors) {
        if (f.rows() != h.q() || f.cols() != h.q())
            throw std::invalid_argument("mgf_bound_product: factor dimension mismatch");
        factors.push_back(f / f.trace().real());
    }

    auto [mean, centered] = product_mean_and_centered_norms(h, factors);
    const double L = h.local_norm();
    const int k = std::max(h.k(), 1);
    const int n = h.n();

    double termwise_log = mean;
    for (size_t i = 0; i < h.terms().size(); ++i) {
        double sz = static_cast<double>(h.terms()[i].sites.size());
        termwise_log += (std::expm1(sz * L) - sz * L / 2.0) * centered[i];
    }
    double klocal_log = mean + (static_cast<double>(n) / k) * (std::expm1(k * L) - k * L / 2.0) * L;

    BoundReport r;
    r.variant = BoundVariant::MgfProduct;
    r.log_value = termwise_log;
    r.value = std::exp(termwise_log);
    r.params["mean"] = mean;
    r.params["local_norm"] = L;
    r.params["n"] = n;
    r.params["k"] = k;
    r.params["termwise_log"] = termwise_log;
    r.params["klocal_log"] = klocal_log;
    return r;
}

BoundReport tail_bound_product(double a, int n, int k, double local_norm, bool explicit_variant) {
    if (a <= 0 || n <= 0 || k <= 0 || local_norm <= 0)
        throw std::invalid_argument("tail_bound_product: all parameters must be positive");
    const double x = a * k / local_norm;
    BoundReport r;
    r.params["a"] = a;
    r.params["n"] = n;
    r.params["k"] = k;
    r.params["local_norm"] = local_norm;
    r.params["x"] = x;
    if (explicit_variant) {
        r.variant = BoundVariant::ProductExplicit;
        double l = std::log1p(x);
        r.log_value = -(static_cast<double>(n) / (2.0 * k * k)) * l * l;
        r.params["s"] = l;
        r.params["F"] = F_tilde(x);
    } else {
        r.variant = BoundVariant::ProductOptimal;
        auto [f, s] = F_and_sstar(x);
        r.log_value = -(static_cast<double>(n) / (static_cast<double>(k) * k)) * f;
        r.params["s"] = s;
        r.params["F"] = f;
    }
    r.value = std::exp(r.log_value);
    return r;
}

BoundReport mgf_bound_correlated(const LocalObservable& h, const Geometry& geom, double xi,
                                 double C, double l, double state_expectation) {
    if (xi <= 0 || l <= 0) throw std::invalid_argument("mgf_bound_correlated: xi and l must be > 0");
    if (C < 0) throw std::invalid_argument("mgf_bound_correlated: C must be >= 0");
    const double L = h.local_norm();
    const int k = std::max(h.k(), 1);
    const int n = h.n();
    const double growth = std::pow(geom.A * std::pow(l, geom.d), 2.0);

    double piece1_log = state_expectation +
                        (static_cast<double>(n) / k) * (std::expm1(k * growth * L) - k * growth * L / 2.0) * L;
    double piece2_log = C > 0 ? std::log(C) + state_expectation + n * L - l / xi
                              : -std::numeric_limits<double>::infinity();

    BoundReport r;
    r.variant = BoundVariant::MgfCorrelated;
    r.log_value = log_sum_exp(piece1_log, piece2_log);
    r.value = std::exp(r.log_value);
    r.params["mean"] = state_expectation;
    r.params["local_norm"] = L;
    r.params["n"] = n;
    r.params["k"] = k;
    r.params["A"] = geom.A;
    r.params["d"] = geom.d;
    r.params["xi"] = xi;
    r.params["C"] = C;
    r.params["l"] = l;
    r.params["piece1_log"] = piece1_log;
    r.params["piece2_log"] = piece2_log;
    return r;
}

BoundReport tail_bound_correlated(double a, int n, int k, double local_norm, double A, double d,
                                  double xi, double C, bool explicit_variant) {
    if (a <= 0 || n <= 0 || k <= 0 || local_norm <= 0 || A <= 0 || xi <= 0)
        throw std::invalid_argument("tail_bound_correlated: parameters must be positive");
    if (d < 1.0) throw std::invalid_argument("tail_bound_correlated: d must be >= 1");
    if (C < 0) throw std::invalid_argument("tail_bound_correlated: C must be >= 0");

    const double x = a * k / local_norm;
    double f, s;
    if (explicit_variant) {
        s = std::log1p(x);
        f = F_tilde(x);
    } else {
        auto [ff, ss] = F_and_sstar(x);
        f = ff;
        s = ss;
    }

    BoundReport r;
    r.variant = explicit_variant ? BoundVariant::CorrelatedExplicit : BoundVariant::CorrelatedOptimal;
    r.params["a"] = a;
    r.params["n"] = n;
    r.params["k"] = k;
    r.params["local_norm"] = local_norm;
    r.params["A"] = A;
    r.params["d"] = d;
    r.params["xi"] = xi;
    r.params["C"] = C;
    r.params["x"] = x;
    r.params["s"] = s;
    r.params["F"] = f;

    if (f + k * s <= 1e-300) {
        // a ~ 0: the balance radius collapses; the inequality is true but says
        // nothing beyond P <= C + 1
        r.vacuous = true;
        r.log_value = std::log1p(C);
        r.value = C + 1.0;
        r.params["l"] = 0.0;
        return r;
    }

    const double bracket = xi / (k * A * A) * (k * s + f);
    const double power = 2.0 * d / (2.0 * d + 1.0);
    const double l = std::pow(static_cast<double>(n) * bracket, 1.0 / (2.0 * d + 1.0));
    r.log_value = std::log1p(C) -
                  std::pow(static_cast<double>(n), 1.0 / (2.0 * d + 1.0)) * f /
                      (k * k * A * A * std::pow(bracket, power));
    r.value = std::exp(r.log_value);
    r.params["l"] = l;
    return r;
}

std::vector<double> state_weights(const Spectrum& sp, const DenseOperator& rho) {
    const long d = sp.eigenvalues.size();
    if (rho.dim() != d) throw std::invalid_argument("state_weights: dimension mismatch");
    std::vector<double> w(static_cast<size_t>(d));
    for (long i = 0; i < d; ++i) {
        auto v = sp.eigenvectors.col(i);
        w[static_cast<size_t>(i)] = (v.adjoint() * rho.mat * v)(0, 0).real();
    }
    return w;
}

double exact_tail(const Spectrum& sp, const std::vector<double>& weights, double threshold) {
    double p = 0.0;
    for (long i = 0; i < sp.eigenvalues.size(); ++i)
        if (sp.eigenvalues(i) >= threshold) p += weights[static_cast<size_t>(i)];
    if (p < 0.0) p = 0.0;
    if (p > 1.0 + 1e-10)
        throw std::runtime_error("exact_tail: probability " + std::to_string(p) + " > 1");
    return p;
}

double exact_mgf(const Spectrum& sp, const std::vector<double>& weights, double t) {
    double v = 0.0;
    for (long i = 0; i < sp.eigenvalues.size(); ++i)
        v += std::exp(t * sp.eigenvalues(i)) * weights[static_cast<size_t>(i)];
    return v;
}

double exact_tail(const DenseOperator& rho, const DenseOperator& h_full, double threshold) {
    if (rho.dim() != h_full.dim()) throw std::invalid_argument("exact_tail: dimension mismatch");
    Spectrum sp = herm_spectrum(h_full);
    return exact_tail(sp, state_weights(sp, rho), threshold);
}

double exact_mgf(const DenseOperator& rho, const DenseOperator& h_full, double t) {
    if (rho.dim() != h_full.dim()) throw std::invalid_argument("exact_mgf: dimension mismatch");
    Spectrum sp = herm_spectrum(h_full);
    return exact_mgf(sp, state_weights(sp, rho), t);
}

std::vector<FuzzRow> concentration_fuzz(std::uint64_t seed, int instances,
                                        const std::vector<double>& grid_fracs, double tail_slack,
                                        double mgf_slack) {
    std::vector<FuzzRow> rows;
    Rng rng(seed);
    for (int inst = 0; inst < instances; ++inst) {
        const int n = rng.uniform_int(4, 10);
        const int k = rng.uniform_int(1, 2);
        LocalObservable h = random_klocal(rng, n, 2, k, n);
        std::vector<Matrix> factors = random_product_state(rng, n, 2);
        Geometry geom = Geometry::chain(n, 2);
        StateSpec spec = StateSpec::product(factors);
        DenseOperator rho = build_state(spec, geom);

        DenseOperator h_full = assemble(h);
        Spectrum sp = herm_spectrum(h_full);
        std::vector<double> weights = state_weights(sp, rho);
        const double mean = expectation(rho, h_full);
        const double lambda_max = sp.eigenvalues(0);
        const double span = lambda_max - mean;

        BoundReport mgf = mgf_bound_product(h, spec);
        const double log_exact_mgf = std::log(exact_mgf(sp, weights, 1.0));

        for (double frac : grid_fracs) {
            FuzzRow row;
            row.instance = inst;
            row.n = n;
            row.k = h.k();
            row.local_norm = h.local_norm();
            row.mean = mean;
            row.a = std::max(frac * span / n, 1e-8);
            row.exact_tail_value = exact_tail(sp, weights, mean + n * row.a);
            BoundReport opt = tail_bound_product(row.a, n, h.k(), h.local_norm(), false);
            BoundReport expl = tail_bound_product(row.a, n, h.k(), h.local_norm(), true);
            row.tail_optimal = opt.value;
            row.tail_explicit = expl.value;
            row.tail_ok = row.exact_tail_value <= opt.value + tail_slack &&
                          row.exact_tail_value <= expl.value + tail_slack;
            row.log_exact_mgf = log_exact_mgf;
            row.log_mgf_termwise = mgf.params.at("termwise_log");
            row.log_mgf_klocal = mgf.params.at("klocal_log");
            row.mgf_ok = log_exact_mgf <= row.log_mgf_termwise + mgf_slack &&
                         log_exact_mgf <= row.log_mgf_klocal + mgf_slack &&
                         row.log_mgf_termwise <= row.log_mgf_klocal + mgf_slack;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace spinw1
