// ensembles.hpp — entropies, the transportation-cost function f and its
// inverse, the Gibbs-vs-generic-state equivalence bound, and the
// microcanonical-vs-canonical experiment.
#pragma once

#include "spinw1/concentration.hpp"
#include "spinw1/geometry.hpp"
#include "spinw1/states.hpp"
#include "spinw1/w1.hpp"

#include <functional>
#include <optional>

namespace spinw1 {

struct EntropyReport {
    double von_neumann = 0.0;        // S(rho), nats
    double von_neumann_sigma = 0.0;  // S(sigma)
    double relative = 0.0;           // S(rho||sigma); +inf sentinel on support failure
    double measured_lb = 0.0;        // lower bound on the measured relative entropy
    std::optional<double> measured_commuting;  // exact S_M when [rho,sigma] ~ 0
};

double von_neumann_entropy(const DenseOperator& rho);
double relative_entropy(const DenseOperator& rho, const DenseOperator& sigma);

// measured_lb maximizes Tr(rho log A) - log Tr(sigma A) over A = e^{t H_w},
// H_w the heuristic W1 witness, t on a 16-point log grid in [1e-2, 10].
EntropyReport entropies(const DenseOperator& rho, const DenseOperator& sigma, int witness_k = 2);

// f(w) = F(kw) / (k^2 A^2 t [xi/(k A^2 t) (k s*(kw) + F(kw))]^{2d/(2d+1)}),
// the transportation-cost rate at witness normalization t.
double tci_f(double w, int k, double A, double d, double xi, double t);

struct TciInverse {
    double w = 0.0;
    bool saturated = false;  // y exceeded f(w_max); returned w_max instead
};

// Bisection solve of f(w) = y on [0, w_max]; w_max = 2 is past the W1-per-spin
// ceiling, so a saturated return means the bound is vacuous, not wrong.
TciInverse tci_f_inverse(double y, int k, double A, double d, double xi, double t,
                         double w_max = 2.0);

// Golden-section maximization of n^{1/(2d+1)} f(w,t) - log(C+1) over
// t in [1e-3, 10].
double auto_tci_t(double w, int k, double A, double d, double xi, double n_value);

struct EquivalenceReport {
    double w = 0.0;            // W1 per spin
    double entropy_gap = 0.0;  // S(omega) - S(rho)
    std::map<std::string, double> f_params;
    double c = 0.0;  // log(C+1)
    double bound_on_w = 0.0;
    bool saturated = false;
    double relative = 0.0;  // S(rho||omega)
    double energy_residual = 0.0;
    bool energy_valid = true;
    double avg_marginal_halfdist = 0.0;
    bool marginal_chain_ok = true;
    std::optional<double> E_star;
    std::optional<double> Delta;
    std::optional<long> shell_dimension;
};

// The entropy-gap bound on the W1 distance per spin between a Gibbs state and
// any state of (approximately) the same average energy. The energy residual is
// always reported; the bound is only flagged valid when it is within
// 1e-6 ||H||. Pass t = nullopt for the auto-optimized witness normalization.
EquivalenceReport equivalence_bound(const DenseOperator& omega, const DenseOperator& rho,
                                    const LocalObservable& h, const Geometry& geom, int k,
                                    double xi, double C, std::optional<double> t = std::nullopt);

struct EStarResult {
    double E_star = 0.0;
    long shell_trace = 0;
};

// argmax_E e^{-beta E} Tr P(E, Delta) over shells anchored 1e-9 below the
// bottom of the spectrum, so the lowest eigenvalue always lands in a shell.
EStarResult e_star(const LocalObservable& h, double beta, double delta);
EStarResult e_star_from_spectrum(const RealVector& eigenvalues, double beta, double delta);

struct EnsembleRow {
    int n = 0;
    double beta = 0.0;
    double delta = 0.0;
    double E_star = 0.0;
    long shell_dim = 0;
    bool shell_empty = false;
    double local_norm = 0.0;
    double spectral_width = 0.0;  // must stay <= n ||H||loc
    double w1_value = 0.0;
    double w = 0.0;
    double S_gibbs = 0.0;
    double S_micro = 0.0;
    double relative = 0.0;     // S(omega_{E*,D} || omega)
    double proof_bound = 0.0;  // log(n ||H||loc / Delta + 1) + beta Delta
    double measured_lb = 0.0;
    double energy_gibbs = 0.0;
    double energy_micro = 0.0;
    double xi_fit = 0.0;
    double C_fit = 0.0;
    double fit_residual = 0.0;
    double t_used = 0.0;
    double tci_rhs = 0.0;  // n^{1/(2d+1)} f(w) - log(C+1)
    double bound_on_w = 0.0;
    bool tci_saturated = false;
};

// For each n: Gibbs and microcanonical states of the family Hamiltonian, the
// W1 distance per spin, the relative-entropy bound
// S(omega_{E*,D}||omega) <= log(n ||H||loc / Delta + 1) + beta Delta, and the
// transportation-cost quantities with fit-estimated (xi, C).
std::vector<EnsembleRow> ensemble_experiment(
    const std::function<LocalObservable(int)>& family, double beta,
    const std::function<double(int, const DenseOperator&)>& delta_rule,
    const std::vector<int>& n_values, int k);

}  // namespace spinw1
