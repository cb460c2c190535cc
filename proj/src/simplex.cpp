#include "spinw1/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spinw1::lp {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;

struct Tableau {
    Eigen::MatrixXd t;       // m x ncols
    Eigen::VectorXd rhs;     // m
    std::vector<int> basis;  // m
    long iterations = 0;
};

// One Bland-rule simplex pass under the given costs. `allowed` masks columns
// that may enter (artificials are locked out in phase 2).
Status iterate(Tableau& tab, const Eigen::VectorXd& cost, const std::vector<bool>& allowed,
               long cap) {
    const long m = tab.t.rows();
    const long ncols = tab.t.cols();
    while (true) {
        Eigen::VectorXd cb(m);
        for (long i = 0; i < m; ++i) cb(i) = cost(tab.basis[static_cast<size_t>(i)]);

        long enter = -1;
        for (long j = 0; j < ncols; ++j) {
            if (!allowed[static_cast<size_t>(j)]) continue;
            double z = cost(j) - cb.dot(tab.t.col(j));
            if (z < -kReducedCostTol) {
                enter = j;
                break;  // Bland: lowest eligible index
            }
        }
        if (enter < 0) return Status::Optimal;

        long leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (long i = 0; i < m; ++i) {
            double a = tab.t(i, enter);
            if (a <= kPivotTol) continue;
            double ratio = tab.rhs(i) / a;
            if (ratio < best_ratio - 1e-12 ||
                (ratio <= best_ratio + 1e-12 &&
                 (leave < 0 || tab.basis[static_cast<size_t>(i)] < tab.basis[static_cast<size_t>(leave)]))) {
                best_ratio = ratio;
                leave = i;
            }
        }
        if (leave < 0) return Status::Unbounded;

        double piv = tab.t(leave, enter);
        tab.t.row(leave) /= piv;
        tab.rhs(leave) /= piv;
        for (long i = 0; i < m; ++i) {
            if (i == leave) continue;
            double f = tab.t(i, enter);
            if (f == 0.0) continue;
            tab.t.row(i) -= f * tab.t.row(leave);
            tab.rhs(i) -= f * tab.rhs(leave);
            if (tab.rhs(i) < 0.0 && tab.rhs(i) > -1e-12) tab.rhs(i) = 0.0;
        }
        tab.basis[static_cast<size_t>(leave)] = static_cast<int>(enter);
        if (++tab.iterations >= cap) return Status::IterationLimit;
    }
}

}  // namespace

Solution solve(const Problem& p) {
    const long m = p.constraints.rows();
    const long n0 = p.constraints.cols();
    if (p.rhs.size() != m || static_cast<long>(p.relations.size()) != m ||
        p.objective.size() != n0)
        throw std::invalid_argument("simplex: inconsistent problem dimensions");

    // normalize to b >= 0
    Eigen::MatrixXd a = p.constraints;
    Eigen::VectorXd b = p.rhs;
    std::vector<Relation> rel = p.relations;
    std::vector<double> rowsign(static_cast<size_t>(m), 1.0);
    for (long i = 0; i < m; ++i) {
        if (b(i) < 0.0) {
            a.row(i) *= -1.0;
            b(i) *= -1.0;
            rowsign[static_cast<size_t>(i)] = -1.0;
            if (rel[static_cast<size_t>(i)] == Relation::LE)
                rel[static_cast<size_t>(i)] = Relation::GE;
            else if (rel[static_cast<size_t>(i)] == Relation::GE)
                rel[static_cast<size_t>(i)] = Relation::LE;
        }
    }

    long n_slack = 0, n_art = 0;
    for (auto r : rel) {
        if (r != Relation::EQ) ++n_slack;
        if (r != Relation::LE) ++n_art;
    }
    const long ncols = n0 + n_slack + n_art;
    const long cap = p.iteration_cap > 0 ? p.iteration_cap : 10 * (m + ncols);

    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(m, ncols);
    full.leftCols(n0) = a;
    std::vector<int> start_basis(static_cast<size_t>(m), -1);
    std::vector<bool> is_artificial(static_cast<size_t>(ncols), false);
    long col = n0;
    for (long i = 0; i < m; ++i) {
        if (rel[static_cast<size_t>(i)] == Relation::LE) {
            full(i, col) = 1.0;
            start_basis[static_cast<size_t>(i)] = static_cast<int>(col);
            ++col;
        } else if (rel[static_cast<size_t>(i)] == Relation::GE) {
            full(i, col) = -1.0;
            ++col;
        }
    }
    for (long i = 0; i < m; ++i) {
        if (rel[static_cast<size_t>(i)] != Relation::LE) {
            full(i, col) = 1.0;
            is_artificial[static_cast<size_t>(col)] = true;
            start_basis[static_cast<size_t>(i)] = static_cast<int>(col);
            ++col;
        }
    }

    Tableau tab;
    tab.t = full;
    tab.rhs = b;
    tab.basis = start_basis;

    Solution sol;
    std::vector<bool> allow_all(static_cast<size_t>(ncols), true);

    if (n_art > 0) {
        Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(ncols);
        for (long j = 0; j < ncols; ++j)
            if (is_artificial[static_cast<size_t>(j)]) phase1(j) = 1.0;
        Status st = iterate(tab, phase1, allow_all, cap);
        sol.iterations = tab.iterations;
        if (st == Status::IterationLimit) {
            sol.status = Status::IterationLimit;
            sol.x = Eigen::VectorXd::Zero(n0);
            sol.duals = Eigen::VectorXd::Zero(m);
            return sol;
        }
        double infeas = 0.0;
        for (long i = 0; i < m; ++i)
            if (is_artificial[static_cast<size_t>(tab.basis[static_cast<size_t>(i)])])
                infeas += tab.rhs(i);
        if (infeas > 1e-7 * (1.0 + b.cwiseAbs().maxCoeff())) {
            sol.status = Status::Infeasible;
            sol.x = Eigen::VectorXd::Zero(n0);
            sol.duals = Eigen::VectorXd::Zero(m);
            return sol;
        }
        // pivot basic artificials out where possible; rows where this fails
        // are redundant and stay inert
        for (long i = 0; i < m; ++i) {
            if (!is_artificial[static_cast<size_t>(tab.basis[static_cast<size_t>(i)])]) continue;
            for (long j = 0; j < ncols; ++j) {
                if (is_artificial[static_cast<size_t>(j)]) continue;
                if (std::abs(tab.t(i, j)) > kPivotTol) {
                    double piv = tab.t(i, j);
                    tab.t.row(i) /= piv;
                    tab.rhs(i) /= piv;
                    for (long r = 0; r < m; ++r) {
                        if (r == i) continue;
                        double f = tab.t(r, j);
                        if (f == 0.0) continue;
                        tab.t.row(r) -= f * tab.t.row(i);
                        tab.rhs(r) -= f * tab.rhs(i);
                    }
                    tab.basis[static_cast<size_t>(i)] = static_cast<int>(j);
                    break;
                }
            }
        }
    }

    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(ncols);
    phase2.head(n0) = p.objective;
    std::vector<bool> allowed(static_cast<size_t>(ncols), true);
    for (long j = 0; j < ncols; ++j)
        if (is_artificial[static_cast<size_t>(j)]) allowed[static_cast<size_t>(j)] = false;

    Status st = iterate(tab, phase2, allowed, cap);
    sol.iterations = tab.iterations;
    sol.status = st == Status::Optimal ? Status::Optimal
                 : st == Status::Unbounded ? Status::Unbounded
                                           : Status::IterationLimit;

    sol.x = Eigen::VectorXd::Zero(n0);
    for (long i = 0; i < m; ++i) {
        int bj = tab.basis[static_cast<size_t>(i)];
        if (bj < n0) sol.x(bj) = tab.rhs(i);
    }
    sol.objective = p.objective.dot(sol.x);

    // duals: solve B^T y = c_B on the (sign-normalized) basis columns,
    // then undo the row flips
    Eigen::MatrixXd bmat(m, m);
    Eigen::VectorXd cb(m);
    for (long i = 0; i < m; ++i) {
        bmat.col(i) = full.col(tab.basis[static_cast<size_t>(i)]);
        cb(i) = phase2(tab.basis[static_cast<size_t>(i)]);
    }
    Eigen::VectorXd y = bmat.transpose().colPivHouseholderQr().solve(cb);
    sol.duals = Eigen::VectorXd(m);
    for (long i = 0; i < m; ++i) sol.duals(i) = rowsign[static_cast<size_t>(i)] * y(i);
    return sol;
}

}  // namespace spinw1::lp
