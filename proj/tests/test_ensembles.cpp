#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinw1/ensembles.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace spinw1;

namespace {
constexpr double kE = std::numbers::e;
}

TEST_CASE("von Neumann entropy fixtures") {
    DenseOperator mixed = make_density_matrix(2, 1, Matrix::Identity(2, 2) / 2.0);
    CHECK(von_neumann_entropy(mixed) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    DenseOperator pure = make_density_matrix(2, 1, testing::basis_density({0}, 2));
    CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0));

    // never exceeds n log q
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        int n = rng.uniform_int(1, 4);
        DenseOperator rho = testing::random_full_state(rng, n);
        CHECK(von_neumann_entropy(rho) <= n * std::log(2.0) + 1e-9);
    }
}

TEST_CASE("relative entropy fixtures") {
    Matrix p = Matrix::Zero(2, 2), q = Matrix::Identity(2, 2) / 2.0;
    p(0, 0) = 1.0;
    DenseOperator rho = make_density_matrix(2, 1, p);
    DenseOperator sigma = make_density_matrix(2, 1, q);
    CHECK(relative_entropy(rho, sigma) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(relative_entropy(rho, rho) == doctest::Approx(0.0));

    // support failure: orthogonal pure states
    DenseOperator down = make_density_matrix(2, 1, testing::basis_density({1}, 2));
    CHECK(std::isinf(relative_entropy(rho, down)));
}

TEST_CASE("entropies report: commuting pair equals the classical KL") {
    Matrix p = Matrix::Zero(2, 2), q = Matrix::Identity(2, 2) / 2.0;
    p(0, 0) = 1.0;
    DenseOperator rho = make_density_matrix(2, 1, p);
    DenseOperator sigma = make_density_matrix(2, 1, q);
    EntropyReport rep = entropies(rho, sigma, 1);
    REQUIRE(rep.measured_commuting.has_value());
    CHECK(*rep.measured_commuting == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(rep.relative == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(rep.measured_lb <= rep.relative + 1e-8);

    EntropyReport same = entropies(rho, rho, 1);
    CHECK(same.relative == doctest::Approx(0.0));
    CHECK(same.measured_lb <= 1e-9);
}

TEST_CASE("data processing: measured lower bound never exceeds the relative entropy") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        int n = rng.uniform_int(1, 3);
        DenseOperator rho = testing::random_full_state(rng, n);
        DenseOperator sigma = testing::random_full_state(rng, n);
        EntropyReport rep = entropies(rho, sigma, 2);
        CHECK(rep.measured_lb >= 0.0);
        CHECK(rep.measured_lb <= rep.relative + 1e-8);
        if (rep.measured_commuting)
            CHECK(*rep.measured_commuting <= rep.relative + 1e-8);
    }
}

TEST_CASE("tci_f fixtures and monotonicity") {
    CHECK(tci_f(0.0, 2, 3.0, 1.0, 1.0, 1.0) == 0.0);

    // closed form at kw = 2(e-1): s* = 1, F = e - 1/2
    int k = 2;
    double w = 2.0 * (kE - 1.0) / k, a = 3.0, d = 1.0, xi = 1.3, t = 0.7;
    double f = kE - 0.5, s = 1.0;
    double bracket = xi / (k * a * a * t) * (k * s + f);
    double oracle = f / (k * k * a * a * t * std::pow(bracket, 2.0 / 3.0));
    CHECK(tci_f(w, k, a, d, xi, t) == doctest::Approx(oracle).epsilon(1e-10));

    CHECK(tci_f(0.1, k, a, d, xi, t) < tci_f(0.5, k, a, d, xi, t));
    CHECK(tci_f(0.5, k, a, d, xi, t) < tci_f(1.0, k, a, d, xi, t));

    CHECK_THROWS_AS(tci_f(0.5, k, a, d, 0.0, t), std::invalid_argument);
    CHECK_THROWS_AS(tci_f(-0.5, k, a, d, xi, t), std::invalid_argument);
}

TEST_CASE("tci_f_inverse round trip and saturation") {
    int k = 2;
    double a = 3.0, d = 1.0, xi = 1.0, t = 1.0;
    CHECK(tci_f_inverse(0.0, k, a, d, xi, t).w == 0.0);
    for (double w : {0.05, 0.2, 0.5, 1.0, 1.7}) {
        double y = tci_f(w, k, a, d, xi, t);
        TciInverse inv = tci_f_inverse(y, k, a, d, xi, t);
        CHECK(!inv.saturated);
        CHECK(inv.w == doctest::Approx(w).epsilon(1e-7));
        CHECK(std::abs(inv.w - w) <= 1e-8);
    }
    double too_big = tci_f(2.0, k, a, d, xi, t) * 1.5;
    TciInverse sat = tci_f_inverse(too_big, k, a, d, xi, t);
    CHECK(sat.saturated);
    CHECK(sat.w == doctest::Approx(2.0));
}

TEST_CASE("auto t maximizes the transportation-cost right-hand side") {
    double w = 0.3;
    int k = 2;
    double a = 3.0, d = 1.0, xi = 1.2;
    double t = auto_tci_t(w, k, a, d, xi, 8.0);
    CHECK(t >= 1e-3);
    CHECK(t <= 10.0);
    double best = tci_f(w, k, a, d, xi, t);
    for (double other : {1e-3, 0.01, 0.1, 1.0, 10.0})
        CHECK(best >= tci_f(w, k, a, d, xi, other) - 1e-9);
}

TEST_CASE("e_star scan fixtures") {
    LocalObservable hz(1, 2, {ObservableTerm{{0}, pauli_matrix('Z')}});
    EStarResult r = e_star(hz, 1.0, 1.0);
    // the shell anchored at the bottom of the spectrum wins: it captures the
    // -1 eigenvalue with weight ~1 against e^{-2} for the +1 shell
    CHECK(r.shell_trace == 1);
    CHECK(r.E_star == doctest::Approx(0.0).epsilon(1e-6));

    // beta = 0 picks the most populated shell
    LocalObservable h2(2, 2, {ObservableTerm{{0}, pauli_matrix('Z')},
                              ObservableTerm{{1}, pauli_matrix('Z')}});
    EStarResult flat = e_star(h2, 0.0, 1.0);
    CHECK(flat.shell_trace == 2);  // the degenerate 0-eigenvalue shell

    // a shell wider than the spectrum holds everything
    EStarResult wide = e_star(h2, 0.7, 10.0);
    CHECK(wide.shell_trace == 4);

    CHECK_THROWS_AS(e_star(hz, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(e_star(hz, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("equivalence bound: Gibbs state against itself") {
    LocalObservable h = tfi_chain(4, 1.0, 1.0);
    Geometry geom = Geometry::chain(4, 2);
    DenseOperator omega = gibbs_state(assemble(h), 0.5);
    EquivalenceReport rep = equivalence_bound(omega, omega, h, geom, 2, 1.2, 0.9);
    CHECK(rep.entropy_gap == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(rep.w <= 1e-9);
    CHECK(rep.energy_valid);
    CHECK(rep.energy_residual <= 1e-10);
    CHECK(rep.bound_on_w >= rep.w);
    CHECK(rep.marginal_chain_ok);
    CHECK(rep.c == doctest::Approx(std::log1p(0.9)));
}

TEST_CASE("equivalence bound: dephased Gibbs state reports its energy residual") {
    LocalObservable h = tfi_chain(4, 1.0, 1.0);
    Geometry geom = Geometry::chain(4, 2);
    DenseOperator omega = gibbs_state(assemble(h), 0.5);
    DenseOperator rho = dephase_computational(omega);
    EquivalenceReport rep = equivalence_bound(omega, rho, h, geom, 2, 1.2, 0.9, 1.0);
    CHECK(rep.energy_residual > 1e-3);  // the transverse field is off-diagonal
    CHECK(!rep.energy_valid);
    CHECK(rep.w > 0.0);
    CHECK(rep.marginal_chain_ok);
    CHECK(rep.relative > 0.0);
}

TEST_CASE("average marginal of a homogeneous product state equals the factor") {
    Rng rng(91);
    Matrix f = random_density(rng, 2);
    Matrix full = kron(kron(f, f), f);
    DenseOperator rho = make_density_matrix(2, 3, full);
    Matrix avg = Matrix::Zero(2, 2);
    for (int x = 0; x < 3; ++x) avg += partial_trace(rho, {x}).mat;
    avg /= 3.0;
    CHECK(max_abs(avg - f) <= 1e-12);
}

TEST_CASE("ensemble experiment on short transverse-field Ising chains") {
    auto family = [](int n) { return tfi_chain(n, 1.0, 1.0); };
    auto delta_rule = [](int, const DenseOperator& hf) { return 0.25 * operator_norm(hf); };
    std::vector<EnsembleRow> rows = ensemble_experiment(family, 0.5, delta_rule, {4, 6}, 2);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(!r.shell_empty);
        CHECK(r.shell_dim >= 1);
        CHECK(r.relative <= r.proof_bound + 1e-8);
        CHECK(r.measured_lb <= r.relative + 1e-8);
        CHECK(r.spectral_width <= r.n * r.local_norm + 1e-8);
        CHECK(std::isfinite(r.w));
        CHECK(r.w >= 0.0);
        // TCI chain with the normalized witness scale t = 1
        double m = std::pow(static_cast<double>(r.n), 1.0 / 3.0);
        double rhs = m * tci_f(r.w, 2, 3.0, 1.0, r.xi_fit, 1.0) - std::log1p(r.C_fit);
        CHECK(r.relative >= rhs - 1e-6);
        CHECK(r.measured_lb >= rhs - 1e-6);
    }
}

TEST_CASE("ensemble experiment degenerate cases") {
    auto family = [](int n) { return tfi_chain(n, 1.0, 1.0); };

    // beta = 0 with a full-width shell: microcanonical = Gibbs = maximally mixed
    auto wide_rule = [](int, const DenseOperator& hf) { return 2.5 * operator_norm(hf); };
    std::vector<EnsembleRow> rows = ensemble_experiment(family, 0.0, wide_rule, {4}, 2);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].shell_dim == 16);
    CHECK(rows[0].w <= 1e-9);
    CHECK(rows[0].relative <= 1e-9);

    // a single n produces a single row
    auto quarter = [](int, const DenseOperator& hf) { return 0.25 * operator_norm(hf); };
    CHECK(ensemble_experiment(family, 0.5, quarter, {4}, 2).size() == 1);
}
