// w1.hpp — the k-local W1 distance: primal linear program over marginal
// trace-norm constraints, dual witness evaluation, and the bound sandwich
//   1/2 sum_x ||rho_x - sigma_x||_1  <=  W1  <=  sum_x max_{L ∋ x} ||rho_L - sigma_L||_1 / (2|L|).
#pragma once

#include "spinw1/observable.hpp"
#include "spinw1/simplex.hpp"

namespace spinw1 {

// All nonempty subsets of [0,n) with at most k sites, lexicographic.
std::vector<std::vector<int>> enumerate_regions(int n, int k);

struct W1Result {
    double value = 0.0;
    std::vector<double> site_weights;
    int k = 1;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    enum class SolverStatus { Optimal, InfeasibleReport, IterationLimit } status =
        SolverStatus::Optimal;
    std::vector<std::vector<int>> active_regions;
    std::vector<std::vector<int>> regions;
    std::vector<double> region_rhs;  // ||rho_L - sigma_L||_1 per region

    // heuristic lower-bound certificate: sign functions of the marginal
    // differences weighted by the LP duals, normalized to unit local norm
    LocalObservable heuristic_witness;
    double witness_value = 0.0;
};

W1Result w1_primal(const DenseOperator& rho, const DenseOperator& sigma, int k);

// Tr[(rho - sigma) H] for a k-local witness with local norm <= 1 (+1e-9);
// norms up to 10% above 1 are rescaled, larger ones rejected.
double dual_witness_value(const DenseOperator& rho, const DenseOperator& sigma,
                          const LocalObservable& h);

std::pair<double, double> w1_bounds(const DenseOperator& rho, const DenseOperator& sigma, int k);

}  // namespace spinw1
