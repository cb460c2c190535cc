// dense.hpp — dense operators on (C^q)^(tensor n): embedding, partial trace,
// Hermitian spectral calculus, norms and expectations.
//
// Convention used everywhere: site 0 is the most significant tensor factor,
// i.e. the basis index of a full-space vector is
//   i = d_0 q^(n-1) + d_1 q^(n-2) + ... + d_{n-1}.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinw1 {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

long ipow(long base, int exp);
std::vector<int> iota_sites(int n);
double max_abs(const Matrix& m);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix pauli_matrix(char letter);  // 'I', 'X', 'Y', 'Z'

struct DenseOperator {
    int q = 2;
    std::vector<int> support;  // factor j of `mat` acts on site support[j]
    Matrix mat;
    bool hermitian = false;

    long dim() const { return mat.rows(); }
    int sites() const { return static_cast<int>(support.size()); }
};

// Validating constructors. `make_operator` checks dim = q^|support|, distinct
// sites and (when requested) Hermiticity to 1e-12 max-entry deviation.
// `make_density_matrix` additionally renormalizes the trace when |Tr-1| <= 1e-9
// and rejects larger deviations.
DenseOperator make_operator(int q, std::vector<int> support, Matrix m,
                            bool expect_hermitian);
DenseOperator make_density_matrix(int q, int n, Matrix m);
DenseOperator identity_operator(int q, std::vector<int> support);

struct Spectrum {
    RealVector eigenvalues;  // descending
    Matrix eigenvectors;     // column i pairs with eigenvalues[i]
};

// Extends `op` to `total_sites` spins, acting as identity off its support.
DenseOperator embed(const DenseOperator& op, int total_sites, int q);

// Marginal on `keep` (returned with ascending site order).
DenseOperator partial_trace(const DenseOperator& rho, std::vector<int> keep);

Spectrum herm_spectrum(const DenseOperator& m);

// V f(diag lambda) V^dag; throws std::domain_error if f is not finite on the
// spectrum (e.g. log of a singular matrix).
DenseOperator func_of_hermitian(const DenseOperator& m,
                                const std::function<double(double)>& f);

double operator_norm(const DenseOperator& m);
double trace_norm(const DenseOperator& m);
double operator_norm(const Matrix& m, bool hermitian);
double trace_norm(const Matrix& m, bool hermitian);

// Tr[rho m]; real part (exact for Hermitian pairs).
double expectation(const DenseOperator& rho, const DenseOperator& m);

}  // namespace spinw1
