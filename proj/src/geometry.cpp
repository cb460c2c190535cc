#include "spinw1/geometry.hpp"

#include <cmath>

namespace spinw1 {

int Geometry::ball_size(int v, double r) const {
    int count = 0;
    for (int w = 0; w < n; ++w)
        if (dist(v, w) <= r + 1e-12) ++count;
    return count;
}

double Geometry::max_distance() const {
    return n > 0 ? dist.maxCoeff() : 0.0;
}

double ball_constant(const RealMatrix& dist, double d) {
    if (d < 1.0) throw std::invalid_argument("ball_constant: d must be >= 1");
    const int n = static_cast<int>(dist.rows());
    const int rmax = std::max(1, static_cast<int>(std::ceil(dist.maxCoeff())));
    double a = 0.0;
    for (int v = 0; v < n; ++v)
        for (int r = 1; r <= rmax; ++r) {
            int count = 0;
            for (int w = 0; w < n; ++w)
                if (dist(v, w) <= static_cast<double>(r) + 1e-12) ++count;
            a = std::max(a, static_cast<double>(count) / std::pow(static_cast<double>(r), d));
        }
    return a;
}

static void validate_distance_matrix(const RealMatrix& dist) {
    const long n = dist.rows();
    if (dist.cols() != n) throw std::invalid_argument("geometry: distance matrix must be square");
    for (long i = 0; i < n; ++i) {
        if (std::abs(dist(i, i)) > 1e-12)
            throw std::invalid_argument("geometry: nonzero diagonal in distance matrix");
        for (long j = 0; j < n; ++j) {
            if (dist(i, j) < -1e-12)
                throw std::invalid_argument("geometry: negative distance");
            if (std::abs(dist(i, j) - dist(j, i)) > 1e-12)
                throw std::invalid_argument("geometry: distance matrix not symmetric");
        }
    }
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            for (long l = 0; l < n; ++l)
                if (dist(i, l) > dist(i, j) + dist(j, l) + 1e-9)
                    throw std::invalid_argument("geometry: triangle inequality violated");
}

static void validate_ball_bound(const Geometry& g) {
    const int rmax = std::max(1, static_cast<int>(std::ceil(g.max_distance())));
    for (int v = 0; v < g.n; ++v)
        for (int r = 1; r <= rmax; ++r)
            if (static_cast<double>(g.ball_size(v, r)) >
                g.A * std::pow(static_cast<double>(r), g.d) + 1e-9)
                throw std::invalid_argument("geometry: ball bound |B(v,r)| <= A r^d violated at v=" +
                                            std::to_string(v) + ", r=" + std::to_string(r));
}

Geometry Geometry::from_matrix(int q, RealMatrix dist, double d, std::optional<double> A) {
    if (q < 2) throw std::invalid_argument("geometry: q must be >= 2");
    if (d < 1.0) throw std::invalid_argument("geometry: d must be >= 1");
    validate_distance_matrix(dist);
    Geometry g;
    g.n = static_cast<int>(dist.rows());
    g.q = q;
    g.d = d;
    g.A = A ? *A : ball_constant(dist, d);
    if (g.A <= 0.0) throw std::invalid_argument("geometry: A must be > 0");
    g.dist = std::move(dist);
    validate_ball_bound(g);
    return g;
}

Geometry Geometry::chain(int n, int q, double d, std::optional<double> A) {
    if (n < 1) throw std::invalid_argument("geometry: n must be >= 1");
    RealMatrix dist(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dist(i, j) = std::abs(i - j);
    return from_matrix(q, std::move(dist), d, A);
}

Geometry Geometry::grid2d(int nx, int ny, int q, double d, std::optional<double> A) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("geometry: grid sides must be >= 1");
    const int n = nx * ny;
    RealMatrix dist(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            dist(a, b) = std::abs(a / ny - b / ny) + std::abs(a % ny - b % ny);
    return from_matrix(q, std::move(dist), d, A);
}

}  // namespace spinw1
