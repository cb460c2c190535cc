#include "spinw1/states.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace spinw1 {

StateSpec StateSpec::product(std::vector<Matrix> factors) {
    StateSpec s;
    s.kind = Kind::Product;
    s.factors = std::move(factors);
    return s;
}

StateSpec StateSpec::gibbs(LocalObservable h, double beta) {
    StateSpec s;
    s.kind = Kind::Gibbs;
    s.hamiltonian = std::move(h);
    s.beta = beta;
    return s;
}

StateSpec StateSpec::microcanonical(LocalObservable h, double energy, double width) {
    StateSpec s;
    s.kind = Kind::Microcanonical;
    s.hamiltonian = std::move(h);
    s.energy = energy;
    s.width = width;
    return s;
}

StateSpec StateSpec::explicit_state(Matrix rho) {
    StateSpec s;
    s.kind = Kind::Explicit;
    s.explicit_rho = std::move(rho);
    return s;
}

static Matrix validated_factor(const Matrix& f, int q) {
    if (f.rows() != q || f.cols() != q)
        throw std::invalid_argument("product state: factor is not q x q");
    if (max_abs(f - f.adjoint()) > 1e-12)
        throw std::invalid_argument("product state: non-Hermitian factor");
    double tr = f.trace().real();
    if (std::abs(tr - 1.0) > 1e-9)
        throw std::invalid_argument("product state: factor trace deviates from 1 by " +
                                    std::to_string(tr - 1.0));
    return f / tr;
}

DenseOperator build_state(const StateSpec& spec, const Geometry& geom) {
    switch (spec.kind) {
        case StateSpec::Kind::Product: {
            if (static_cast<int>(spec.factors.size()) != geom.n)
                throw std::invalid_argument("product state: expected " + std::to_string(geom.n) +
                                            " factors, got " + std::to_string(spec.factors.size()));
            Matrix full = Matrix::Identity(1, 1);
            for (const auto& f : spec.factors) full = kron(full, validated_factor(f, geom.q));
            return make_density_matrix(geom.q, geom.n, std::move(full));
        }
        case StateSpec::Kind::Gibbs: {
            if (spec.beta < 0) throw std::invalid_argument("gibbs state: beta must be >= 0");
            const LocalObservable& h = *spec.hamiltonian;
            if (h.n() != geom.n || h.q() != geom.q)
                throw std::invalid_argument("gibbs state: observable does not match geometry");
            return gibbs_state(assemble(h), spec.beta);
        }
        case StateSpec::Kind::Microcanonical: {
            const LocalObservable& h = *spec.hamiltonian;
            if (h.n() != geom.n || h.q() != geom.q)
                throw std::invalid_argument("microcanonical state: observable does not match geometry");
            return microcanonical_state(assemble(h), spec.energy, spec.width);
        }
        case StateSpec::Kind::Explicit:
            return make_density_matrix(geom.q, geom.n, spec.explicit_rho);
    }
    throw std::logic_error("build_state: unreachable");
}

DenseOperator gibbs_state(const DenseOperator& h_full, double beta) {
    if (beta < 0) throw std::invalid_argument("gibbs state: beta must be >= 0");
    Spectrum sp = herm_spectrum(h_full);
    const long d = h_full.dim();
    const double lambda_min = sp.eigenvalues(d - 1);
    RealVector w(d);
    for (long i = 0; i < d; ++i) w(i) = std::exp(-beta * (sp.eigenvalues(i) - lambda_min));
    w /= w.sum();
    Matrix rho = sp.eigenvectors * w.asDiagonal() * sp.eigenvectors.adjoint();
    rho = ((rho + rho.adjoint()) / 2.0).eval();
    return DenseOperator{h_full.q, h_full.support, std::move(rho), true};
}

std::vector<long> shell_members(const RealVector& eigenvalues, double energy, double width) {
    std::vector<long> members;
    for (long i = 0; i < eigenvalues.size(); ++i) {
        double rounded = std::round(eigenvalues(i) / 1e-10) * 1e-10;
        if (rounded > energy - width && rounded <= energy) members.push_back(i);
    }
    return members;
}

DenseOperator microcanonical_state(const DenseOperator& h_full, double energy, double width) {
    if (width <= 0) throw std::invalid_argument("microcanonical state: width must be > 0");
    Spectrum sp = herm_spectrum(h_full);
    std::vector<long> members = shell_members(sp.eigenvalues, energy, width);
    if (members.empty())
        throw std::runtime_error("microcanonical state: empty shell (" +
                                 std::to_string(energy - width) + ", " + std::to_string(energy) + "]");
    const long d = h_full.dim();
    Matrix rho = Matrix::Zero(d, d);
    for (long i : members) rho += sp.eigenvectors.col(i) * sp.eigenvectors.col(i).adjoint();
    rho /= static_cast<double>(members.size());
    rho = ((rho + rho.adjoint()) / 2.0).eval();
    return DenseOperator{h_full.q, h_full.support, std::move(rho), true};
}

DenseOperator dephase_computational(const DenseOperator& rho) {
    Matrix out = Matrix::Zero(rho.dim(), rho.dim());
    for (long i = 0; i < rho.dim(); ++i) out(i, i) = rho.mat(i, i).real();
    return DenseOperator{rho.q, rho.support, std::move(out), true};
}

std::vector<Matrix> single_site_probes(int q) {
    if (q < 2) throw std::invalid_argument("probes: q must be >= 2");
    if (q == 2) return {pauli_matrix('X'), pauli_matrix('Y'), pauli_matrix('Z')};
    std::vector<Matrix> probes;
    for (int a = 0; a < q; ++a)
        for (int b = a + 1; b < q; ++b) {
            Matrix sym = Matrix::Zero(q, q), asym = Matrix::Zero(q, q);
            sym(a, b) = sym(b, a) = 1.0;
            asym(a, b) = Complex(0, -1);
            asym(b, a) = Complex(0, 1);
            probes.push_back(sym);
            probes.push_back(asym);
        }
    for (int l = 1; l < q; ++l) {
        Matrix diag = Matrix::Zero(q, q);
        for (int i = 0; i < l; ++i) diag(i, i) = 1.0;
        diag(l, l) = -static_cast<double>(l);
        probes.push_back(diag / static_cast<double>(l));  // unit operator norm
    }
    return probes;
}

CorrelationFit estimate_correlation_length(const DenseOperator& rho, const Geometry& geom,
                                           const std::vector<Matrix>& probes) {
    if (geom.n < 3)
        throw std::invalid_argument("correlation length: need n >= 3");
    if (probes.empty()) throw std::invalid_argument("correlation length: empty probe set");
    for (const auto& p : probes)
        if (std::abs(operator_norm(p, true) - 1.0) > 1e-9)
            throw std::invalid_argument("correlation length: probes must have unit operator norm");

    CorrelationFit fit;
    std::map<long, double> bins;  // distance rounded to 1e-9 -> max covariance
    for (int x = 0; x < geom.n; ++x)
        for (int y = x + 1; y < geom.n; ++y) {
            if (geom.dist(x, y) <= 1e-12) continue;  // coincident sites carry no decay information
            DenseOperator rho_xy = partial_trace(rho, {x, y});
            DenseOperator rho_x = partial_trace(rho_xy, {x});
            DenseOperator rho_y = partial_trace(rho_xy, {y});
            double cov = 0.0;
            for (const auto& p : probes)
                for (const auto& r : probes) {
                    double joint = (rho_xy.mat * kron(p, r)).trace().real();
                    double mx = (rho_x.mat * p).trace().real();
                    double my = (rho_y.mat * r).trace().real();
                    cov = std::max(cov, std::abs(joint - mx * my));
                }
            double dist = geom.dist(x, y);
            fit.samples.emplace_back(dist, cov);
            long key = std::lround(dist * 1e9);
            auto it = bins.find(key);
            if (it == bins.end())
                bins[key] = cov;
            else
                it->second = std::max(it->second, cov);
        }

    bool all_tiny = true;
    for (const auto& [dist, cov] : fit.samples)
        if (cov > 1e-13) all_tiny = false;
    if (all_tiny) {
        fit.C = 0.0;
        fit.xi = std::numeric_limits<double>::infinity();
        fit.residual = 0.0;
        return fit;
    }

    std::vector<std::pair<double, double>> usable;  // (distance, log cov)
    for (const auto& [key, cov] : bins)
        if (cov > 1e-13) usable.emplace_back(static_cast<double>(key) / 1e9, std::log(cov));
    if (usable.size() < 2) throw FitUnderdetermined(fit.samples);

    double sd = 0, sl = 0, sdd = 0, sdl = 0;
    const double m = static_cast<double>(usable.size());
    for (const auto& [dist, logc] : usable) {
        sd += dist;
        sl += logc;
        sdd += dist * dist;
        sdl += dist * logc;
    }
    double denom = m * sdd - sd * sd;
    double slope = (m * sdl - sd * sl) / denom;
    double intercept = (sl - slope * sd) / m;

    if (slope >= -1e-15) {
        // covariance not decaying at these sizes: report the flat sentinel
        fit.xi = std::numeric_limits<double>::infinity();
        fit.C = std::exp(sl / m);
        double rss = 0;
        for (const auto& [dist, logc] : usable) rss += (logc - sl / m) * (logc - sl / m);
        fit.residual = std::sqrt(rss / m);
        return fit;
    }

    fit.xi = -1.0 / slope;
    fit.C = std::exp(intercept);
    double rss = 0;
    for (const auto& [dist, logc] : usable) {
        double r = logc - (intercept + slope * dist);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / m);
    return fit;
}

}  // namespace spinw1
