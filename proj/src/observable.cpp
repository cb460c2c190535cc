#include "spinw1/observable.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace spinw1 {

Matrix sort_factors(const Matrix& m, std::vector<int>& sites, int q) {
    const int k = static_cast<int>(sites.size());
    std::vector<int> sorted = sites;
    std::sort(sorted.begin(), sorted.end());
    if (sorted == sites) return m;

    // target factor slot of each original factor
    std::vector<int> tpos(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j)
        tpos[static_cast<size_t>(j)] = static_cast<int>(
            std::find(sorted.begin(), sorted.end(), sites[static_cast<size_t>(j)]) - sorted.begin());

    const long dim = m.rows();
    std::vector<long> remap(static_cast<size_t>(dim), 0);
    for (long r = 0; r < dim; ++r) {
        long rem = r, out = 0;
        for (int j = k - 1; j >= 0; --j) {
            long digit = rem % q;
            rem /= q;
            out += digit * ipow(q, k - 1 - tpos[static_cast<size_t>(j)]);
        }
        remap[static_cast<size_t>(r)] = out;
    }
    Matrix res(dim, dim);
    for (long r = 0; r < dim; ++r)
        for (long c = 0; c < dim; ++c)
            res(remap[static_cast<size_t>(r)], remap[static_cast<size_t>(c)]) = m(r, c);
    sites = std::move(sorted);
    return res;
}

LocalObservable::LocalObservable(int n, int q, std::vector<ObservableTerm> terms, double offset)
    : n_(n), q_(q), k_(0), offset_(offset), local_norm_(0.0) {
    if (n < 1) throw std::invalid_argument("observable: n must be >= 1");
    if (q < 2) throw std::invalid_argument("observable: q must be >= 2");

    std::map<std::vector<int>, Matrix> merged;
    for (auto& t : terms) {
        if (t.sites.empty()) throw std::invalid_argument("observable: empty term region");
        std::vector<int> s = t.sites;
        std::sort(s.begin(), s.end());
        for (size_t i = 0; i + 1 < s.size(); ++i)
            if (s[i] == s[i + 1])
                throw std::invalid_argument("observable: repeated site " + std::to_string(s[i]) +
                                            " in term region");
        for (int v : s)
            if (v < 0 || v >= n)
                throw std::invalid_argument("observable: site " + std::to_string(v) +
                                            " out of range [0," + std::to_string(n) + ")");
        long want = ipow(q, static_cast<int>(s.size()));
        if (t.h.rows() != want || t.h.cols() != want)
            throw std::invalid_argument("observable: term matrix dim " + std::to_string(t.h.rows()) +
                                        " != q^" + std::to_string(s.size()));
        if (max_abs(t.h - t.h.adjoint()) > 1e-12)
            throw std::invalid_argument("observable: non-Hermitian term matrix");

        std::vector<int> order = t.sites;
        Matrix hs = sort_factors(t.h, order, q);
        auto it = merged.find(order);
        if (it == merged.end())
            merged.emplace(std::move(order), std::move(hs));
        else
            it->second += hs;
    }

    for (auto& [sites, h] : merged) {
        if (max_abs(h) <= 1e-15) continue;
        terms_.push_back(ObservableTerm{sites, h});
    }

    per_site_.assign(static_cast<size_t>(n), 0.0);
    for (const auto& t : terms_) {
        double norm = operator_norm(t.h, true);
        term_norms_.push_back(norm);
        k_ = std::max(k_, static_cast<int>(t.sites.size()));
        for (int v : t.sites) per_site_[static_cast<size_t>(v)] += norm;
    }
    for (double s : per_site_) local_norm_ = std::max(local_norm_, 2.0 * s);
}

LocalObservable LocalObservable::scaled(double factor) const {
    std::vector<ObservableTerm> terms = terms_;
    for (auto& t : terms) t.h *= factor;
    return LocalObservable(n_, q_, std::move(terms), offset_ * factor);
}

LocalObservable center(const LocalObservable& h, const DenseOperator& rho) {
    if (rho.dim() != ipow(h.q(), h.n()))
        throw std::invalid_argument("center: state dimension mismatch");
    std::vector<ObservableTerm> out;
    for (const auto& t : h.terms()) {
        DenseOperator marginal = partial_trace(rho, t.sites);
        double mean = (marginal.mat * t.h).trace().real();
        Matrix centered = t.h - mean * Matrix::Identity(t.h.rows(), t.h.cols());
        out.push_back(ObservableTerm{t.sites, std::move(centered)});
    }
    return LocalObservable(h.n(), h.q(), std::move(out), 0.0);
}

DenseOperator assemble(const LocalObservable& h, long dim_cap) {
    const long dim = ipow(h.q(), h.n());
    if (dim > dim_cap)
        throw std::runtime_error("assemble: dimension " + std::to_string(dim) +
                                 " exceeds cap " + std::to_string(dim_cap));
    Matrix full = h.offset() * Matrix::Identity(dim, dim);
    for (const auto& t : h.terms()) {
        DenseOperator op{h.q(), t.sites, t.h, true};
        full += embed(op, h.n(), h.q()).mat;
    }
    return DenseOperator{h.q(), iota_sites(h.n()), std::move(full), true};
}

LocalObservable tfi_chain(int n, double coupling, double field) {
    std::vector<ObservableTerm> terms;
    Matrix zz = kron(pauli_matrix('Z'), pauli_matrix('Z'));
    for (int i = 0; i + 1 < n; ++i)
        terms.push_back(ObservableTerm{{i, i + 1}, coupling * zz});
    for (int i = 0; i < n; ++i)
        terms.push_back(ObservableTerm{{i}, field * pauli_matrix('X')});
    return LocalObservable(n, 2, std::move(terms));
}

}  // namespace spinw1
