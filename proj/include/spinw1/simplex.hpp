// simplex.hpp — dense two-phase primal simplex with Bland's anti-cycling rule.
// Solves  min c.x  s.t.  A x {<=,=,>=} b,  x >= 0.
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace spinw1::lp {

enum class Relation { LE, EQ, GE };
enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Problem {
    Eigen::VectorXd objective;
    Eigen::MatrixXd constraints;
    Eigen::VectorXd rhs;
    std::vector<Relation> relations;
    long iteration_cap = 0;  // 0 -> 10 * (rows + columns)
};

struct Solution {
    Status status = Status::Optimal;
    Eigen::VectorXd x;
    double objective = 0.0;
    Eigen::VectorXd duals;  // one multiplier per input row
    long iterations = 0;
};

Solution solve(const Problem& p);

}  // namespace spinw1::lp
