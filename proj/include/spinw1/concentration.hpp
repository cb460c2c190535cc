// concentration.hpp — the concentration machinery: the rate function F and its
// maximizer s*, the explicit surrogate F~, moment-generating-function and tail
// bounds for product and exponentially-correlated states, and the exact
// diagonalization oracles they are checked against.
#pragma once

#include "spinw1/geometry.hpp"
#include "spinw1/observable.hpp"
#include "spinw1/states.hpp"

#include <cstdint>
#include <map>

namespace spinw1 {

struct FResult {
    double F;
    double s_star;
};

// F(x) = max_{s>0} s(x - e^s + 1 + s/2); s* solves (e^s - 1)(s + 1) = x.
// Safeguarded Newton on [0, 1 + log(1+x)], residual <= 1e-12 (1 + x).
FResult F_and_sstar(double x);

// F~(x) = log^2(x+1)/2, the value of the objective at s = log(x+1); always <= F(x).
double F_tilde(double x);

enum class BoundVariant {
    ProductOptimal,
    ProductExplicit,
    CorrelatedOptimal,
    CorrelatedExplicit,
    MgfProduct,
    MgfCorrelated,
};

struct BoundReport {
    double value = 0.0;      // exp(log_value); may overflow to inf
    double log_value = 0.0;  // computed in log space first
    std::map<std::string, double> params;
    BoundVariant variant = BoundVariant::ProductOptimal;
    bool vacuous = false;
};

// <e^H> <= exp[<H> + sum_L (e^{|L| ||H||loc} - 1 - |L| ||H||loc / 2) ||h_L||]
// with centered h_L, plus the k-local form
// exp[<H> + (n/k)(e^{k ||H||loc} - 1 - k ||H||loc / 2) ||H||loc].
// params carry both logs; the term-wise form never exceeds the k-local one.
BoundReport mgf_bound_product(const LocalObservable& h, const StateSpec& omega);

// P(H >= <H> + n a) <= exp[-(n/k^2) F(ak/||H||loc)]; the explicit variant
// replaces F by log^2(ak/||H||loc + 1)/2.
BoundReport tail_bound_product(double a, int n, int k, double local_norm, bool explicit_variant);

// Two-piece MGF bound for states with correlation length xi and constant C,
// at enlargement radius l.
BoundReport mgf_bound_correlated(const LocalObservable& h, const Geometry& geom, double xi,
                                 double C, double l, double state_expectation);

// (C+1) exp[-n^{1/(2d+1)} F(x) / (k^2 A^2 [xi/(kA^2) (k s*(x) + F(x))]^{2d/(2d+1)})]
// with x = ak/||H||loc; also reports the chosen l = [n xi (k s* + F)/(k A^2)]^{1/(2d+1)}.
// The explicit variant substitutes s = log(x+1) and F~.
BoundReport tail_bound_correlated(double a, int n, int k, double local_norm, double A, double d,
                                  double xi, double C, bool explicit_variant);

// Brute-force oracles.
double exact_tail(const DenseOperator& rho, const DenseOperator& h_full, double threshold);
double exact_mgf(const DenseOperator& rho, const DenseOperator& h_full, double t);

// Spectrum-reusing forms (one diagonalization, many thresholds).
std::vector<double> state_weights(const Spectrum& sp, const DenseOperator& rho);
double exact_tail(const Spectrum& sp, const std::vector<double>& weights, double threshold);
double exact_mgf(const Spectrum& sp, const std::vector<double>& weights, double t);

// One row of the soundness fuzzing harness: a random product state and random
// k-local observable, with the exact tail/MGF against every bound variant.
struct FuzzRow {
    int instance = 0;
    int n = 0;
    int k = 0;
    double local_norm = 0.0;
    double mean = 0.0;
    double a = 0.0;
    double exact_tail_value = 0.0;
    double tail_optimal = 0.0;
    double tail_explicit = 0.0;
    bool tail_ok = true;
    double log_exact_mgf = 0.0;
    double log_mgf_termwise = 0.0;
    double log_mgf_klocal = 0.0;
    bool mgf_ok = true;
};

// Seeded instances: n in [4,10], q = 2, k in {1,2}; grid_fracs scale the
// deviation grid a_j = frac_j (lambda_max - <H>)/n. tail slack is absolute,
// MGF slack is relative (log-space).
std::vector<FuzzRow> concentration_fuzz(std::uint64_t seed, int instances,
                                        const std::vector<double>& grid_fracs,
                                        double tail_slack = 1e-12, double mgf_slack = 1e-9);

}  // namespace spinw1
