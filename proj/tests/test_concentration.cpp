#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinw1/concentration.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace spinw1;

namespace {
constexpr double kE = std::numbers::e;
}

TEST_CASE("F and s* anchors") {
    auto [f0, s0] = F_and_sstar(0.0);
    CHECK(f0 == 0.0);
    CHECK(s0 == 0.0);

    // (e^s - 1)(s + 1) = x inverts in closed form at s = 1
    double x = 2.0 * (kE - 1.0);
    auto [f1, s1] = F_and_sstar(x);
    CHECK(s1 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(f1 == doctest::Approx(x - kE + 1.5).epsilon(1e-10));

    CHECK_THROWS_AS(F_and_sstar(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(F_tilde(-0.1), std::invalid_argument);
}

TEST_CASE("F matches the dense grid-search maximization") {
    for (double x : {0.5, 1.0, 2.5, 5.0, 10.0, 20.0}) {
        double grid = testing::grid_search_F(x);
        CHECK(F_and_sstar(x).F == doctest::Approx(grid).epsilon(1e-9));
        CHECK(std::abs(F_and_sstar(x).F - grid) <= 1e-6);
    }
}

TEST_CASE("F_tilde fixtures and domination by F") {
    CHECK(F_tilde(0.0) == 0.0);
    CHECK(F_tilde(kE - 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(F_tilde(3.0) == doctest::Approx(0.5 * std::log(4.0) * std::log(4.0)).epsilon(1e-12));

    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
        double x = 0.2 * i;
        double f = F_and_sstar(x).F;
        CHECK(F_tilde(x) <= f + 1e-12);
        CHECK(f > prev);  // strictly increasing
        prev = f;
    }
}

TEST_CASE("mgf product bound: identity observable is exact") {
    LocalObservable id(2, 2, {}, 1.3);
    Rng rng(5);
    StateSpec omega = StateSpec::product(random_product_state(rng, 2, 2));
    BoundReport r = mgf_bound_product(id, omega);
    CHECK(r.log_value == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(r.params.at("termwise_log") <= r.params.at("klocal_log") + 1e-12);
}

TEST_CASE("mgf product bound dominates the exact MGF of a single spin") {
    LocalObservable hz(1, 2, {{{0}, pauli_matrix('Z')}});
    std::vector<Matrix> mixed = {Matrix::Identity(2, 2) / 2.0};
    StateSpec omega = StateSpec::product(mixed);
    BoundReport r = mgf_bound_product(hz, omega);

    DenseOperator rho = make_density_matrix(2, 1, mixed[0]);
    double exact = exact_mgf(rho, assemble(hz), 1.0);
    CHECK(exact == doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
    CHECK(std::log(exact) <= r.params.at("termwise_log") + 1e-12);
    CHECK(r.params.at("termwise_log") <= r.params.at("klocal_log") + 1e-12);

    CHECK_THROWS_AS(mgf_bound_product(hz, StateSpec::explicit_state(mixed[0])),
                    std::invalid_argument);
}

TEST_CASE("mgf product bound is homogeneous in the observable scale") {
    Rng rng(19);
    LocalObservable h = random_klocal(rng, 3, 2, 2, 3).scaled(0.2);
    StateSpec omega = StateSpec::product(random_product_state(rng, 3, 2));
    double t = 1.7;
    BoundReport scaled = mgf_bound_product(h.scaled(t), omega);

    // recompute the k-local form from scratch with ||tH||loc = t ||H||loc
    double lt = t * h.local_norm();
    CHECK(h.scaled(t).local_norm() == doctest::Approx(lt).epsilon(1e-12));
    double mean = scaled.params.at("mean");
    int k = h.k(), n = h.n();
    double expected = mean + (static_cast<double>(n) / k) * (std::expm1(k * lt) - k * lt / 2.0) * lt;
    CHECK(scaled.params.at("klocal_log") == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("tail bound product anchors") {
    double x = 2.0 * (kE - 1.0);
    // choose a and local_norm so ak/||H||loc = x with n = k^2
    BoundReport r = tail_bound_product(x, 1, 1, 1.0, false);
    CHECK(r.value == doctest::Approx(std::exp(-(x - kE + 1.5))).epsilon(1e-9));

    BoundReport tiny = tail_bound_product(1e-12, 5, 1, 1.0, false);
    CHECK(tiny.value == doctest::Approx(1.0).epsilon(1e-6));

    BoundReport n1 = tail_bound_product(0.7, 4, 2, 1.5, false);
    BoundReport n2 = tail_bound_product(0.7, 8, 2, 1.5, false);
    CHECK(n2.log_value == doctest::Approx(2.0 * n1.log_value).epsilon(1e-12));

    // the optimized variant is at least as tight across the whole grid
    for (int i = 1; i <= 100; ++i) {
        double a = 0.05 * i;
        CHECK(tail_bound_product(a, 4, 2, 1.5, false).value <=
              tail_bound_product(a, 4, 2, 1.5, true).value + 1e-15);
    }

    CHECK_THROWS_AS(tail_bound_product(-1.0, 4, 1, 1.0, false), std::invalid_argument);
    CHECK_THROWS_AS(tail_bound_product(0.5, 4, 1, 0.0, false), std::invalid_argument);
}

TEST_CASE("tail bound is monotone in the local norm argument") {
    for (double l1 : {0.5, 1.0, 2.0})
        for (double l2 : {2.5, 4.0, 8.0})
            for (bool expl : {false, true}) {
                double b1 = tail_bound_product(0.6, 6, 2, l1, expl).value;
                double b2 = tail_bound_product(0.6, 6, 2, l2, expl).value;
                CHECK(b2 >= b1 - 1e-15);
            }
}

TEST_CASE("correlated MGF bound pieces behave as the radius grows") {
    LocalObservable h = tfi_chain(4, 1.0, 1.0);
    Geometry geom = Geometry::chain(4, 2);
    BoundReport small = mgf_bound_correlated(h, geom, 1.0, 0.5, 1.0, -1.0);
    BoundReport large = mgf_bound_correlated(h, geom, 1.0, 0.5, 8.0, -1.0);
    CHECK(large.params.at("piece1_log") > small.params.at("piece1_log"));
    CHECK(large.params.at("piece2_log") < small.params.at("piece2_log"));

    BoundReport nocorr = mgf_bound_correlated(h, geom, 1.0, 0.0, 2.0, -1.0);
    CHECK(nocorr.log_value == doctest::Approx(nocorr.params.at("piece1_log")).epsilon(1e-12));

    CHECK_THROWS_AS(mgf_bound_correlated(h, geom, -1.0, 0.5, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mgf_bound_correlated(h, geom, 1.0, 0.5, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("correlated MGF bound agrees with an independent transcription") {
    LocalObservable h = tfi_chain(5, 1.0, 0.7).scaled(0.05);
    Geometry geom = Geometry::chain(5, 2);
    double xi = 1.3, c_const = 0.4, l = 0.5, mean = -2.1;
    BoundReport r = mgf_bound_correlated(h, geom, xi, c_const, l, mean);

    double big_l = h.local_norm();
    int n = 5, k = 2;
    double g = std::pow(geom.A * std::pow(l, geom.d), 2.0);
    double piece1 = std::exp(mean + (static_cast<double>(n) / k) *
                                        (std::exp(k * g * big_l) - 1.0 - k * g * big_l / 2.0) * big_l);
    double piece2 = c_const * std::exp(mean + n * big_l - l / xi);
    CHECK(r.log_value == doctest::Approx(std::log(piece1 + piece2)).epsilon(1e-10));
}

TEST_CASE("correlated tail bound matches an independent transcription") {
    double x = 2.0 * (kE - 1.0);
    int k = 1, n = 1000;
    double a_big = 3.0, d = 1.0, xi = 1.0, c_const = 1.0;
    BoundReport r = tail_bound_correlated(x, n, k, 1.0, a_big, d, xi, c_const, false);

    double f = x - kE + 1.5, s = 1.0;
    double bracket = xi / (k * a_big * a_big) * (k * s + f);
    double oracle = (c_const + 1.0) *
                    std::exp(-std::pow(n, 1.0 / 3.0) * f /
                             (k * k * a_big * a_big * std::pow(bracket, 2.0 / 3.0)));
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(r.params.at("l") ==
          doctest::Approx(std::pow(n * bracket, 1.0 / 3.0)).epsilon(1e-10));

    // explicit variant with s = log(1+x), F~ = log^2(1+x)/2
    BoundReport rx = tail_bound_correlated(x, n, k, 1.0, a_big, d, xi, c_const, true);
    double se = std::log1p(x), fe = 0.5 * se * se;
    double bre = xi / (k * a_big * a_big) * (k * se + fe);
    double oraclex = (c_const + 1.0) * std::exp(-std::pow(n, 1.0 / 3.0) * fe /
                                                (k * k * a_big * a_big * std::pow(bre, 2.0 / 3.0)));
    CHECK(rx.value == doctest::Approx(oraclex).epsilon(1e-10));
}

TEST_CASE("correlated tail bound limits") {
    // a -> 0: vacuous, clipped at C + 1
    BoundReport tiny = tail_bound_correlated(1e-320, 100, 1, 1.0, 3.0, 1.0, 1.0, 0.7, false);
    CHECK(tiny.vacuous);
    CHECK(tiny.value == doctest::Approx(1.7));

    double prev = 2.0;
    for (int n : {10, 100, 1000, 10000}) {
        double v = tail_bound_correlated(1.0, n, 1, 1.0, 3.0, 1.0, 1.0, 0.7, false).value;
        CHECK(v < prev);
        prev = v;
    }

    CHECK_THROWS_AS(tail_bound_correlated(1.0, 10, 1, 1.0, 3.0, 0.5, 1.0, 0.7, false),
                    std::invalid_argument);
}

TEST_CASE("exact tail oracle") {
    DenseOperator mixed = make_density_matrix(2, 2, Matrix::Identity(4, 4) / 4.0);
    LocalObservable h(2, 2, {{{0}, pauli_matrix('Z')}, {{1}, pauli_matrix('Z')}});
    DenseOperator hf = assemble(h);
    CHECK(exact_tail(mixed, hf, 2.0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(exact_tail(mixed, hf, -3.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(exact_tail(mixed, hf, 2.5) == doctest::Approx(0.0));

    DenseOperator small = make_density_matrix(2, 1, Matrix::Identity(2, 2) / 2.0);
    CHECK_THROWS_AS(exact_tail(small, hf, 0.0), std::invalid_argument);
}

TEST_CASE("exact MGF oracle") {
    DenseOperator mixed = make_density_matrix(2, 1, Matrix::Identity(2, 2) / 2.0);
    DenseOperator z{2, {0}, pauli_matrix('Z'), true};
    CHECK(exact_mgf(mixed, z, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(exact_mgf(mixed, z, 1.0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-12));

    // commuting case: sum_i p_i e^{t lambda_i}
    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = 0.3;
    diag(1, 1) = 0.7;
    DenseOperator rho = make_density_matrix(2, 1, diag);
    double t = 0.8;
    CHECK(exact_mgf(rho, z, t) ==
          doctest::Approx(0.3 * std::exp(t) + 0.7 * std::exp(-t)).epsilon(1e-12));
}

TEST_CASE("soundness fuzz: exact values never exceed the bounds") {
    std::vector<double> grid;
    for (int j = 1; j <= 10; ++j) grid.push_back(0.1 * j);
    std::vector<FuzzRow> rows = concentration_fuzz(20240607, 25, grid);
    CHECK(rows.size() == 250);
    for (const auto& r : rows) {
        CHECK(r.tail_ok);
        CHECK(r.mgf_ok);
        CHECK(r.exact_tail_value >= 0.0);
        CHECK(r.exact_tail_value <= 1.0 + 1e-10);
    }
}
