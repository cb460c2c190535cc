// states.hpp — construction of the state families (product, Gibbs,
// microcanonical, explicit) and empirical correlation-length estimation.
#pragma once

#include "spinw1/geometry.hpp"
#include "spinw1/observable.hpp"

#include <limits>
#include <optional>
#include <utility>

namespace spinw1 {

struct StateSpec {
    enum class Kind { Product, Gibbs, Microcanonical, Explicit };
    Kind kind = Kind::Product;
    std::vector<Matrix> factors;                 // Product: one q x q density matrix per site
    std::optional<LocalObservable> hamiltonian;  // Gibbs / Microcanonical
    double beta = 0.0;
    double energy = 0.0;
    double width = 0.0;
    Matrix explicit_rho;

    static StateSpec product(std::vector<Matrix> factors);
    static StateSpec gibbs(LocalObservable h, double beta);
    static StateSpec microcanonical(LocalObservable h, double energy, double width);
    static StateSpec explicit_state(Matrix rho);
};

DenseOperator build_state(const StateSpec& spec, const Geometry& geom);

DenseOperator gibbs_state(const DenseOperator& h_full, double beta);
DenseOperator microcanonical_state(const DenseOperator& h_full, double energy, double width);

// Indices of eigenvalues in the half-open shell (E - Delta, E], with
// eigenvalues rounded to 1e-10 before the comparison.
std::vector<long> shell_members(const RealVector& eigenvalues, double energy, double width);

// Kills off-diagonal entries in the computational basis.
DenseOperator dephase_computational(const DenseOperator& rho);

// Traceless Hermitian single-site probes of unit operator norm
// (X, Y, Z for q = 2; normalized Gell-Mann matrices otherwise).
std::vector<Matrix> single_site_probes(int q);

struct CorrelationFit {
    double C = 0.0;
    double xi = std::numeric_limits<double>::infinity();
    double residual = 0.0;
    std::vector<std::pair<double, double>> samples;  // (distance, max covariance)
};

struct FitUnderdetermined : std::runtime_error {
    std::vector<std::pair<double, double>> samples;
    explicit FitUnderdetermined(std::vector<std::pair<double, double>> s)
        : std::runtime_error("correlation fit underdetermined: fewer than 2 usable distance bins"),
          samples(std::move(s)) {}
};

// Max covariance per distance bin over all probe pairs, then a least-squares
// fit of log cov = log C - dist/xi over bins with cov > 1e-13. All covariances
// <= 1e-13 yields the C = 0, xi = +inf sentinel.
CorrelationFit estimate_correlation_length(const DenseOperator& rho, const Geometry& geom,
                                           const std::vector<Matrix>& probes);

}  // namespace spinw1
