// observable.hpp — local observables as explicit decompositions
// H = offset*I + sum_Lambda h_Lambda, with the fixed-decomposition local norm
//   2 max_x sum_{Lambda containing x} ||h_Lambda||.
// The identity component lives in `offset` (the empty-region term) and never
// contributes to the norm, so identity-only observables have norm zero.
#pragma once

#include "spinw1/dense.hpp"

namespace spinw1 {

struct ObservableTerm {
    std::vector<int> sites;  // ascending after normalization
    Matrix h;                // Hermitian, dim q^|sites|
};

class LocalObservable {
public:
    // Normalizes on construction: sorts each term's sites (permuting tensor
    // factors to match), merges terms with identical regions, drops terms that
    // vanish, and caches per-site norm sums.
    LocalObservable(int n, int q, std::vector<ObservableTerm> terms, double offset = 0.0);
    LocalObservable() : LocalObservable(1, 2, {}) {}

    int n() const { return n_; }
    int q() const { return q_; }
    int k() const { return k_; }
    double offset() const { return offset_; }
    double local_norm() const { return local_norm_; }
    const std::vector<double>& per_site() const { return per_site_; }
    const std::vector<ObservableTerm>& terms() const { return terms_; }
    const std::vector<double>& term_norms() const { return term_norms_; }

    LocalObservable scaled(double factor) const;

private:
    int n_, q_, k_;
    double offset_;
    std::vector<ObservableTerm> terms_;
    std::vector<double> term_norms_;
    std::vector<double> per_site_;
    double local_norm_;
};

// Permutes the tensor factors of `m` (acting on `sites` in the given order)
// so its factors follow ascending site order.
Matrix sort_factors(const Matrix& m, std::vector<int>& sites, int q);

// h_Lambda -> h_Lambda - Tr[rho h_Lambda] I per term; offset dropped, so the
// result has rho-expectation zero.
LocalObservable center(const LocalObservable& h, const DenseOperator& rho);

// Full-space realization offset*I + sum embed(h_Lambda).
DenseOperator assemble(const LocalObservable& h, long dim_cap = 1L << 14);

// Open transverse-field Ising chain: sum coupling Z_i Z_{i+1} + sum field X_i.
LocalObservable tfi_chain(int n, double coupling, double field);

}  // namespace spinw1
