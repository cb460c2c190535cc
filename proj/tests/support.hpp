// Shared test fixtures and independent oracles.
#pragma once

#include "spinw1/random.hpp"
#include "spinw1/states.hpp"

#include <cmath>

namespace spinw1::testing {

// Independent grid-search maximization of s(x - e^s + 1 + s/2) over s in
// [0, 10] at the given step.
inline double grid_search_F(double x, double step = 1e-5) {
    double best = 0.0;
    for (double s = 0.0; s <= 10.0; s += step) {
        double v = s * (x - std::expm1(s) + s / 2.0);
        if (v > best) best = v;
    }
    return best;
}

inline Matrix basis_density(const std::vector<int>& digits, int q) {
    long dim = 1;
    for (size_t i = 0; i < digits.size(); ++i) dim *= q;
    long idx = 0;
    for (int d : digits) idx = idx * q + d;
    Matrix rho = Matrix::Zero(dim, dim);
    rho(idx, idx) = 1.0;
    return rho;
}

// (|000...> + sign |111...>)/sqrt(2)
inline DenseOperator ghz_state(int n, double sign) {
    long dim = ipow(2, n);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(0) = 1.0 / std::sqrt(2.0);
    psi(dim - 1) = sign / std::sqrt(2.0);
    return make_density_matrix(2, n, psi * psi.adjoint());
}

// Random single-qubit channel from a Haar-ish isometry, applied to `site` of
// an n-qubit state.
inline DenseOperator apply_random_single_site_channel(Rng& rng, const DenseOperator& rho,
                                                      int site) {
    Matrix g = random_gaussian_complex(rng, 4, 2);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix v = qr.householderQ() * Matrix::Identity(4, 2);  // 4x2 isometry
    const int n = rho.sites();
    Matrix out = Matrix::Zero(rho.dim(), rho.dim());
    for (int e = 0; e < 2; ++e) {
        Matrix kraus(2, 2);
        for (int so = 0; so < 2; ++so)
            for (int si = 0; si < 2; ++si) kraus(so, si) = v(so * 2 + e, si);
        DenseOperator kfull = embed(DenseOperator{2, {site}, kraus, false}, n, 2);
        out += kfull.mat * rho.mat * kfull.mat.adjoint();
    }
    out = ((out + out.adjoint()) / 2.0).eval();
    return DenseOperator{2, rho.support, std::move(out), true};
}

inline DenseOperator random_full_state(Rng& rng, int n, int q = 2) {
    return make_density_matrix(q, n, random_density(rng, ipow(q, n)));
}

}  // namespace spinw1::testing
