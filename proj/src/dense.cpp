#include "spinw1/dense.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace spinw1 {

long ipow(long base, int exp) {
    long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

std::vector<int> iota_sites(int n) {
    std::vector<int> s(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) s[static_cast<size_t>(i)] = i;
    return s;
}

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix pauli_matrix(char letter) {
    Matrix m(2, 2);
    switch (letter) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default:
            throw std::invalid_argument(std::string("unknown Pauli letter '") + letter + "'");
    }
    return m;
}

static void check_support(const std::vector<int>& support) {
    std::vector<int> s = support;
    std::sort(s.begin(), s.end());
    for (size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i] == s[i + 1])
            throw std::invalid_argument("repeated site " + std::to_string(s[i]) + " in support");
    for (int v : s)
        if (v < 0) throw std::invalid_argument("negative site index in support");
}

DenseOperator make_operator(int q, std::vector<int> support, Matrix m, bool expect_hermitian) {
    if (q < 2) throw std::invalid_argument("local dimension q must be >= 2");
    if (m.rows() != m.cols()) throw std::invalid_argument("operator matrix must be square");
    check_support(support);
    long want = ipow(q, static_cast<int>(support.size()));
    if (m.rows() != want)
        throw std::invalid_argument("dim mismatch: expected " + std::to_string(want) +
                                    " = q^" + std::to_string(support.size()) + ", got " +
                                    std::to_string(m.rows()));
    if (expect_hermitian) {
        double dev = max_abs(m - m.adjoint());
        if (dev > 1e-12)
            throw std::invalid_argument("operator not Hermitian: max |M - M^dag| = " +
                                        std::to_string(dev));
    }
    return DenseOperator{q, std::move(support), std::move(m), expect_hermitian};
}

DenseOperator make_density_matrix(int q, int n, Matrix m) {
    DenseOperator op = make_operator(q, iota_sites(n), std::move(m), true);
    double tr = op.mat.trace().real();
    if (std::abs(tr - 1.0) > 1e-9)
        throw std::invalid_argument("density matrix trace deviates from 1 by " +
                                    std::to_string(tr - 1.0));
    if (tr != 1.0) op.mat /= tr;
    return op;
}

DenseOperator identity_operator(int q, std::vector<int> support) {
    long d = ipow(q, static_cast<int>(support.size()));
    return DenseOperator{q, std::move(support), Matrix::Identity(d, d), true};
}

// Offsets of every local index into a composite index, for factors living at
// the given positions out of `total_positions` (most significant factor first).
static std::vector<long> index_offsets(const std::vector<int>& positions,
                                       int total_positions, int q) {
    const int k = static_cast<int>(positions.size());
    const long dloc = ipow(q, k);
    std::vector<long> stride(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j)
        stride[static_cast<size_t>(j)] = ipow(q, total_positions - 1 - positions[static_cast<size_t>(j)]);
    std::vector<long> off(static_cast<size_t>(dloc), 0);
    for (long r = 0; r < dloc; ++r) {
        long rem = r;
        for (int j = k - 1; j >= 0; --j) {
            off[static_cast<size_t>(r)] += (rem % q) * stride[static_cast<size_t>(j)];
            rem /= q;
        }
    }
    return off;
}

DenseOperator embed(const DenseOperator& op, int total_sites, int q) {
    if (op.q != q) throw std::invalid_argument("embed: local dimension mismatch");
    for (int s : op.support)
        if (s < 0 || s >= total_sites)
            throw std::invalid_argument("embed: support index " + std::to_string(s) +
                                        " out of range [0," + std::to_string(total_sites) + ")");
    const int m = op.sites();
    if (op.mat.rows() != ipow(q, m)) throw std::invalid_argument("embed: dim mismatch");

    std::vector<int> env;
    for (int s = 0; s < total_sites; ++s)
        if (std::find(op.support.begin(), op.support.end(), s) == op.support.end())
            env.push_back(s);

    const std::vector<long> loc_off = index_offsets(op.support, total_sites, q);
    const std::vector<long> env_off = index_offsets(env, total_sites, q);
    const long dloc = static_cast<long>(loc_off.size());
    const long denv = static_cast<long>(env_off.size());

    Matrix out = Matrix::Zero(ipow(q, total_sites), ipow(q, total_sites));
    for (long r = 0; r < dloc; ++r)
        for (long c = 0; c < dloc; ++c) {
            const Complex v = op.mat(r, c);
            if (v == Complex(0, 0)) continue;
            for (long e = 0; e < denv; ++e)
                out(loc_off[static_cast<size_t>(r)] + env_off[static_cast<size_t>(e)],
                    loc_off[static_cast<size_t>(c)] + env_off[static_cast<size_t>(e)]) = v;
        }
    return DenseOperator{q, iota_sites(total_sites), std::move(out), op.hermitian};
}

DenseOperator partial_trace(const DenseOperator& rho, std::vector<int> keep) {
    if (rho.mat.rows() != rho.mat.cols())
        throw std::invalid_argument("partial_trace: non-square input");
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

    const int m = rho.sites();
    std::vector<int> keep_pos, traced_pos;
    for (int site : keep) {
        auto it = std::find(rho.support.begin(), rho.support.end(), site);
        if (it == rho.support.end())
            throw std::invalid_argument("partial_trace: site " + std::to_string(site) +
                                        " not in support");
        keep_pos.push_back(static_cast<int>(it - rho.support.begin()));
    }
    for (int p = 0; p < m; ++p)
        if (std::find(keep_pos.begin(), keep_pos.end(), p) == keep_pos.end())
            traced_pos.push_back(p);

    const int q = rho.q;
    const std::vector<long> koff = index_offsets(keep_pos, m, q);
    const std::vector<long> toff = index_offsets(traced_pos, m, q);
    const long dk = static_cast<long>(koff.size());

    Matrix out = Matrix::Zero(dk, dk);
    for (long r = 0; r < dk; ++r)
        for (long c = 0; c < dk; ++c) {
            Complex acc(0, 0);
            for (long t : toff) acc += rho.mat(koff[static_cast<size_t>(r)] + t,
                                               koff[static_cast<size_t>(c)] + t);
            out(r, c) = acc;
        }
    return DenseOperator{q, std::move(keep), std::move(out), rho.hermitian};
}

Spectrum herm_spectrum(const DenseOperator& m) {
    if (!m.hermitian)
        throw std::invalid_argument("herm_spectrum: operator not flagged Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.mat);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("herm_spectrum: eigensolver failed");
    const long d = m.dim();
    Spectrum sp;
    sp.eigenvalues = RealVector(d);
    sp.eigenvectors = Matrix(d, d);
    for (long i = 0; i < d; ++i) {
        sp.eigenvalues(i) = es.eigenvalues()(d - 1 - i);
        sp.eigenvectors.col(i) = es.eigenvectors().col(d - 1 - i);
    }
    return sp;
}

DenseOperator func_of_hermitian(const DenseOperator& m,
                                const std::function<double(double)>& f) {
    Spectrum sp = herm_spectrum(m);
    RealVector fv(sp.eigenvalues.size());
    for (long i = 0; i < sp.eigenvalues.size(); ++i) {
        double y = f(sp.eigenvalues(i));
        if (!std::isfinite(y))
            throw std::domain_error("func_of_hermitian: f undefined at eigenvalue " +
                                    std::to_string(sp.eigenvalues(i)));
        fv(i) = y;
    }
    Matrix out = sp.eigenvectors * fv.asDiagonal() * sp.eigenvectors.adjoint();
    out = ((out + out.adjoint()) / 2.0).eval();
    return DenseOperator{m.q, m.support, std::move(out), true};
}

double operator_norm(const Matrix& m, bool hermitian) {
    if (m.rows() == 0) return 0.0;
    if (hermitian) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    if (m.rows() <= 256) {
        Eigen::JacobiSVD<Matrix> svd(m);
        return svd.singularValues()(0);
    }
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double trace_norm(const Matrix& m, bool hermitian) {
    if (m.rows() == 0) return 0.0;
    if (hermitian) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().sum();
    }
    if (m.rows() <= 256) {
        Eigen::JacobiSVD<Matrix> svd(m);
        return svd.singularValues().sum();
    }
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues().sum();
}

double operator_norm(const DenseOperator& m) { return operator_norm(m.mat, m.hermitian); }
double trace_norm(const DenseOperator& m) { return trace_norm(m.mat, m.hermitian); }

double expectation(const DenseOperator& rho, const DenseOperator& m) {
    if (rho.dim() != m.dim())
        throw std::invalid_argument("expectation: dimension mismatch");
    return (rho.mat * m.mat).trace().real();
}

}  // namespace spinw1
