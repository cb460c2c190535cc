// geometry.hpp — spin-lattice geometry: pairwise distances plus the
// ball-growth constants (A, d) with |B(v,r)| <= A r^d.
#pragma once

#include "spinw1/dense.hpp"

#include <optional>

namespace spinw1 {

struct Geometry {
    int n = 1;
    int q = 2;
    RealMatrix dist;  // symmetric, zero diagonal, triangle inequality
    double A = 1.0;
    double d = 1.0;

    int ball_size(int v, double r) const;
    double max_distance() const;

    static Geometry chain(int n, int q, double d = 1.0,
                          std::optional<double> A = std::nullopt);
    static Geometry grid2d(int nx, int ny, int q, double d = 2.0,
                           std::optional<double> A = std::nullopt);
    static Geometry from_matrix(int q, RealMatrix dist, double d,
                                std::optional<double> A = std::nullopt);
};

// Minimal A with |B(v,r)| <= A r^d over all sites and integer radii r >= 1.
double ball_constant(const RealMatrix& dist, double d);

}  // namespace spinw1
