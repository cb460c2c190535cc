// random.hpp — seedable counter-based PRNG (splitmix64) and the random
// instance generators used by the fuzzing harness and tests. Identical seeds
// reproduce identical draws on any IEEE-754 platform.
#pragma once

#include "spinw1/observable.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

namespace spinw1 {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform() {  // [0, 1)
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

inline Matrix random_gaussian_complex(Rng& rng, long rows, long cols) {
    Matrix m(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) m(i, j) = Complex(rng.gaussian(), rng.gaussian());
    return m;
}

// Traceless Gaussian Hermitian matrix normalized to unit operator norm.
inline Matrix random_traceless_hermitian_unit(Rng& rng, long dim) {
    Matrix g = random_gaussian_complex(rng, dim, dim);
    Matrix h = ((g + g.adjoint()) / 2.0).eval();
    h -= (h.trace() / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
    double norm = operator_norm(h, true);
    if (norm < 1e-14) {
        h = Matrix::Zero(dim, dim);
        h(0, 0) = 1.0;
        h(dim - 1, dim - 1) = -1.0;
        norm = 1.0;
    }
    return h / norm;
}

inline Matrix random_pure_density(Rng& rng, long dim) {
    Matrix psi = random_gaussian_complex(rng, dim, 1);
    psi /= std::sqrt(psi.squaredNorm());
    return psi * psi.adjoint();
}

inline Matrix random_density(Rng& rng, long dim) {
    Matrix g = random_gaussian_complex(rng, dim, dim);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

// Gaussian pure single-site factors, each depolarized with probability 1/2.
inline std::vector<Matrix> random_product_state(Rng& rng, int n, int q,
                                                bool maybe_depolarize = true) {
    std::vector<Matrix> factors;
    for (int i = 0; i < n; ++i) {
        Matrix f = random_pure_density(rng, q);
        if (maybe_depolarize && rng.uniform() < 0.5) {
            double p = 0.9 * rng.uniform();
            f = (1.0 - p) * f + p / static_cast<double>(q) * Matrix::Identity(q, q);
        }
        factors.push_back(std::move(f));
    }
    return factors;
}

inline std::vector<int> random_distinct_sites(Rng& rng, int n, int count) {
    std::vector<int> pool = iota_sites(n);
    for (int i = 0; i < count; ++i) {
        int j = rng.uniform_int(i, n - 1);
        std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
    }
    pool.resize(static_cast<size_t>(count));
    return pool;
}

inline LocalObservable random_klocal(Rng& rng, int n, int q, int k, int nterms) {
    std::vector<ObservableTerm> terms;
    for (int t = 0; t < nterms; ++t) {
        int size = rng.uniform_int(1, std::min(k, n));
        std::vector<int> sites = random_distinct_sites(rng, n, size);
        terms.push_back(ObservableTerm{std::move(sites),
                                       random_traceless_hermitian_unit(rng, ipow(q, size))});
    }
    return LocalObservable(n, q, std::move(terms));
}

}  // namespace spinw1
