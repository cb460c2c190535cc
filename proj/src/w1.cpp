#include "spinw1/w1.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace spinw1 {

std::vector<std::vector<int>> enumerate_regions(int n, int k) {
    if (k < 1 || k > n)
        throw std::invalid_argument("enumerate_regions: k out of range [1," + std::to_string(n) + "]");
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto dfs = [&](auto&& self, int start) -> void {
        for (int s = start; s < n; ++s) {
            cur.push_back(s);
            out.push_back(cur);
            if (static_cast<int>(cur.size()) < k) self(self, s + 1);
            cur.pop_back();
        }
    };
    dfs(dfs, 0);
    return out;
}

namespace {

void check_pair(const DenseOperator& rho, const DenseOperator& sigma) {
    if (rho.dim() != sigma.dim() || rho.q != sigma.q || rho.support != sigma.support)
        throw std::invalid_argument("w1: states live on different spaces");
}

// marginal difference rho_L - sigma_L together with its trace norm
struct RegionDiff {
    Matrix diff;
    double rhs;
};

RegionDiff region_diff(const DenseOperator& rho, const DenseOperator& sigma,
                       const std::vector<int>& region) {
    Matrix d = partial_trace(rho, region).mat - partial_trace(sigma, region).mat;
    double rhs = trace_norm(d, true);
    return {std::move(d), rhs};
}

Matrix sign_of_hermitian(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    RealVector s(es.eigenvalues().size());
    for (long i = 0; i < s.size(); ++i) {
        double v = es.eigenvalues()(i);
        s(i) = v > 1e-12 ? 1.0 : (v < -1e-12 ? -1.0 : 0.0);
    }
    Matrix out = es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
    return ((out + out.adjoint()) / 2.0).eval();
}

std::pair<double, double> bounds_from_rhs(int n, const std::vector<std::vector<int>>& regions,
                                          const std::vector<double>& rhs) {
    double lower = 0.0;
    std::vector<double> site_max(static_cast<size_t>(n), 0.0);
    for (size_t i = 0; i < regions.size(); ++i) {
        if (regions[i].size() == 1) lower += 0.5 * rhs[i];
        double scaled = rhs[i] / (2.0 * static_cast<double>(regions[i].size()));
        for (int x : regions[i])
            site_max[static_cast<size_t>(x)] = std::max(site_max[static_cast<size_t>(x)], scaled);
    }
    double upper = 0.0;
    for (double v : site_max) upper += v;
    return {lower, upper};
}

}  // namespace

W1Result w1_primal(const DenseOperator& rho, const DenseOperator& sigma, int k) {
    check_pair(rho, sigma);
    const int n = rho.sites();
    W1Result res;
    res.k = k;
    res.regions = enumerate_regions(n, k);
    const long m = static_cast<long>(res.regions.size());

    std::vector<Matrix> diffs;
    diffs.reserve(res.regions.size());
    res.region_rhs.reserve(res.regions.size());
    for (const auto& region : res.regions) {
        RegionDiff rd = region_diff(rho, sigma, region);
        diffs.push_back(std::move(rd.diff));
        res.region_rhs.push_back(rd.rhs);
    }

    lp::Problem prob;
    prob.objective = Eigen::VectorXd::Ones(n);
    prob.constraints = Eigen::MatrixXd::Zero(m, n);
    prob.rhs = Eigen::VectorXd(m);
    prob.relations.assign(static_cast<size_t>(m), lp::Relation::GE);
    for (long i = 0; i < m; ++i) {
        for (int x : res.regions[static_cast<size_t>(i)]) prob.constraints(i, x) = 2.0;
        prob.rhs(i) = res.region_rhs[static_cast<size_t>(i)];
    }

    lp::Solution sol = lp::solve(prob);
    switch (sol.status) {
        case lp::Status::Optimal: res.status = W1Result::SolverStatus::Optimal; break;
        case lp::Status::IterationLimit: res.status = W1Result::SolverStatus::IterationLimit; break;
        default: res.status = W1Result::SolverStatus::InfeasibleReport; break;
    }

    res.value = sol.objective;
    res.site_weights.assign(static_cast<size_t>(n), 0.0);
    for (int x = 0; x < n; ++x) res.site_weights[static_cast<size_t>(x)] = std::max(sol.x(x), 0.0);

    for (long i = 0; i < m; ++i) {
        double lhs = 0.0;
        for (int x : res.regions[static_cast<size_t>(i)]) lhs += 2.0 * sol.x(x);
        if (std::abs(lhs - prob.rhs(i)) <= 1e-7 * std::max(1.0, prob.rhs(i)))
            res.active_regions.push_back(res.regions[static_cast<size_t>(i)]);
    }

    auto [lower, upper] = bounds_from_rhs(n, res.regions, res.region_rhs);
    res.lower_bound = lower;
    res.upper_bound = upper;

    // heuristic witness from the LP duals
    std::vector<ObservableTerm> terms;
    for (long i = 0; i < m; ++i) {
        double y = sol.duals(i);
        if (y <= 1e-12 || res.region_rhs[static_cast<size_t>(i)] <= 1e-13) continue;
        terms.push_back(ObservableTerm{res.regions[static_cast<size_t>(i)],
                                       y * sign_of_hermitian(diffs[static_cast<size_t>(i)])});
    }
    LocalObservable witness(n, rho.q, std::move(terms));
    if (witness.local_norm() > 1e-12) witness = witness.scaled(1.0 / witness.local_norm());
    res.witness_value = 0.0;
    for (size_t i = 0; i < witness.terms().size(); ++i) {
        const auto& t = witness.terms()[i];
        // locate the matching region's cached difference
        auto it = std::find(res.regions.begin(), res.regions.end(), t.sites);
        res.witness_value += (diffs[static_cast<size_t>(it - res.regions.begin())] * t.h).trace().real();
    }
    res.heuristic_witness = std::move(witness);
    return res;
}

double dual_witness_value(const DenseOperator& rho, const DenseOperator& sigma,
                          const LocalObservable& h) {
    check_pair(rho, sigma);
    if (rho.dim() != ipow(h.q(), h.n()))
        throw std::invalid_argument("dual_witness_value: observable dimension mismatch");
    double norm = h.local_norm();
    double scale = 1.0;
    if (norm > 1.0 + 1e-9) {
        if (norm > 1.1)
            throw std::invalid_argument("dual_witness_value: local norm " + std::to_string(norm) +
                                        " exceeds 1 by more than 10%");
        scale = 1.0 / norm;
    }
    double value = 0.0;
    for (const auto& t : h.terms()) {
        Matrix d = partial_trace(rho, t.sites).mat - partial_trace(sigma, t.sites).mat;
        value += (d * t.h).trace().real();
    }
    return scale * value;
}

std::pair<double, double> w1_bounds(const DenseOperator& rho, const DenseOperator& sigma, int k) {
    check_pair(rho, sigma);
    const int n = rho.sites();
    std::vector<std::vector<int>> regions = enumerate_regions(n, k);
    std::vector<double> rhs;
    rhs.reserve(regions.size());
    for (const auto& region : regions) rhs.push_back(region_diff(rho, sigma, region).rhs);
    return bounds_from_rhs(n, regions, rhs);
}

}  // namespace spinw1
