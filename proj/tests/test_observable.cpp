#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinw1/schema.hpp"
#include "support.hpp"

#include <cmath>

using nlohmann::json;
using namespace spinw1;

TEST_CASE("parse_observable expands Pauli strings") {
    json terms = json::array({{{"sites", {0}}, {"pauli", "Z"}, {"coeff", 1.0}}});
    LocalObservable h = parse_observable(terms, 2, 2);
    REQUIRE(h.terms().size() == 1);
    CHECK(max_abs(h.terms()[0].h - pauli_matrix('Z')) < 1e-14);
    CHECK(h.k() == 1);

    json zz = json::array({{{"sites", {0, 1}}, {"pauli", "ZZ"}, {"coeff", 0.5}}});
    LocalObservable h2 = parse_observable(zz, 2, 2);
    REQUIRE(h2.terms().size() == 1);
    CHECK(max_abs(h2.terms()[0].h - 0.5 * kron(pauli_matrix('Z'), pauli_matrix('Z'))) < 1e-14);
    CHECK(h2.k() == 2);
}

TEST_CASE("parse_observable error cases name the offending term") {
    json bad_letter = json::array({{{"sites", {0}}, {"pauli", "Q"}}});
    CHECK_THROWS_WITH_AS(parse_observable(bad_letter, 2, 2),
                         doctest::Contains("hamiltonian[0].pauli"), ValidationError);

    json repeated = json::array({{{"sites", {0, 0}}, {"pauli", "ZZ"}}});
    CHECK_THROWS_WITH_AS(parse_observable(repeated, 2, 2), doctest::Contains("repeated site"),
                         ValidationError);

    json nonherm = json::array(
        {{{"sites", {0}}, {"matrix", {{0, 0}, {1, 0}, {0, 0}, {0, 0}}}}});
    CHECK_THROWS_WITH_AS(parse_observable(nonherm, 1, 2), doctest::Contains("Hermitian"),
                         ValidationError);

    json out_of_range = json::array({{{"sites", {5}}, {"pauli", "Z"}}});
    CHECK_THROWS_AS(parse_observable(out_of_range, 2, 2), ValidationError);
}

TEST_CASE("identity components route to the offset") {
    // a pure identity observable has local norm zero
    json id_terms = json::array({{{"sites", {0}}, {"pauli", "I"}, {"coeff", 2.5}}});
    LocalObservable h = parse_observable(id_terms, 2, 2);
    CHECK(h.terms().empty());
    CHECK(h.offset() == doctest::Approx(2.5));
    CHECK(h.local_norm() == 0.0);
    CHECK(max_abs(assemble(h).mat - 2.5 * Matrix::Identity(4, 4)) < 1e-14);

    // identity letters shrink the support
    json iz = json::array({{{"sites", {0, 1}}, {"pauli", "IZ"}}});
    LocalObservable h2 = parse_observable(iz, 2, 2);
    REQUIRE(h2.terms().size() == 1);
    CHECK(h2.terms()[0].sites == std::vector<int>{1});

    // explicit matrices are trace-stripped
    json proj = json::array({{{"sites", {0}}, {"matrix", {{1, 0}, {0, 0}, {0, 0}, {0, 0}}}}});
    LocalObservable h3 = parse_observable(proj, 1, 2);  // |0><0| = I/2 + Z/2
    CHECK(h3.offset() == doctest::Approx(0.5));
    REQUIRE(h3.terms().size() == 1);
    CHECK(max_abs(h3.terms()[0].h - 0.5 * pauli_matrix('Z')) < 1e-13);
}

TEST_CASE("local norm fixtures") {
    int n = 5;
    std::vector<ObservableTerm> site_terms;
    for (int i = 0; i < n; ++i) site_terms.push_back({{i}, pauli_matrix('Z')});
    LocalObservable h(n, 2, site_terms);
    CHECK(h.local_norm() == doctest::Approx(2.0));
    CHECK(h.k() == 1);

    Matrix zz = kron(pauli_matrix('Z'), pauli_matrix('Z'));
    LocalObservable h2(3, 2, {{{0, 1}, zz}, {{1, 2}, zz}});
    CHECK(h2.local_norm() == doctest::Approx(4.0));  // site 1 sits in both terms
    CHECK(h2.k() == 2);
    CHECK(h2.per_site()[1] == doctest::Approx(2.0));

    LocalObservable h3(1, 2, {{{0}, 0.5 * pauli_matrix('X')}});
    CHECK(h3.local_norm() == doctest::Approx(1.0));
}

TEST_CASE("terms with identical regions are merged") {
    LocalObservable h(2, 2, {{{0}, pauli_matrix('Z')}, {{0}, pauli_matrix('Z')}});
    REQUIRE(h.terms().size() == 1);
    CHECK(h.local_norm() == doctest::Approx(4.0));

    // unsorted site lists merge with sorted ones after factor permutation
    Matrix zx = kron(pauli_matrix('Z'), pauli_matrix('X'));  // Z on first listed site
    LocalObservable h2(2, 2, {{{1, 0}, zx}, {{0, 1}, kron(pauli_matrix('X'), pauli_matrix('Z'))}});
    REQUIRE(h2.terms().size() == 1);
    CHECK(h2.local_norm() == doctest::Approx(4.0));
}

TEST_CASE("center fixtures") {
    Geometry geom = Geometry::chain(1, 2);
    LocalObservable hz(1, 2, {{{0}, pauli_matrix('Z')}});

    DenseOperator mixed = make_density_matrix(2, 1, Matrix::Identity(2, 2) / 2.0);
    LocalObservable centered = center(hz, mixed);
    REQUIRE(centered.terms().size() == 1);
    CHECK(max_abs(centered.terms()[0].h - pauli_matrix('Z')) < 1e-13);

    DenseOperator up = make_density_matrix(2, 1, testing::basis_density({0}, 2));
    LocalObservable shifted = center(hz, up);
    REQUIRE(shifted.terms().size() == 1);
    CHECK(max_abs(shifted.terms()[0].h - (pauli_matrix('Z') - Matrix::Identity(2, 2))) < 1e-13);
    CHECK(std::abs(expectation(up, assemble(shifted))) <= 1e-10);

    // centering an identity-only observable leaves nothing
    LocalObservable id(1, 2, {}, 3.0);
    LocalObservable zeroed = center(id, up);
    CHECK(zeroed.terms().empty());
    CHECK(zeroed.offset() == 0.0);
    CHECK(max_abs(assemble(zeroed).mat) < 1e-14);
}

TEST_CASE("centered terms have zero expectation on random instances") {
    Rng rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        int n = rng.uniform_int(2, 5);
        LocalObservable h = random_klocal(rng, n, 2, 2, n + 1);
        DenseOperator rho = testing::random_full_state(rng, n);
        LocalObservable c = center(h, rho);
        for (const auto& t : c.terms()) {
            DenseOperator term{2, t.sites, t.h, true};
            CHECK(std::abs(expectation(rho, embed(term, n, 2))) <= 1e-10);
        }
        CHECK(std::abs(expectation(rho, assemble(c))) <= 1e-9);
    }
}

TEST_CASE("assemble fixtures") {
    LocalObservable h(2, 2, {{{0}, pauli_matrix('Z')}, {{1}, pauli_matrix('Z')}});
    Matrix expect = Matrix::Zero(4, 4);
    expect.diagonal() << 2, 0, 0, -2;
    CHECK(max_abs(assemble(h).mat - expect) < 1e-14);

    LocalObservable empty(3, 2, {});
    CHECK(max_abs(assemble(empty).mat) == 0.0);

    Rng rng(2);
    Matrix full = 2.0 * random_traceless_hermitian_unit(rng, 8);
    LocalObservable single(3, 2, {{{0, 1, 2}, full}});
    CHECK(max_abs(assemble(single).mat - full) < 1e-12);

    LocalObservable big(15, 2, {{{0}, pauli_matrix('Z')}});
    CHECK_THROWS_AS(assemble(big), std::runtime_error);
}

TEST_CASE("local norm is a seminorm on fixed decompositions") {
    Rng rng(53);
    for (int trial = 0; trial < 40; ++trial) {
        int n = rng.uniform_int(2, 6);
        LocalObservable a = random_klocal(rng, n, 2, 2, n);
        LocalObservable b = random_klocal(rng, n, 2, 2, n);
        std::vector<ObservableTerm> both = a.terms();
        for (const auto& t : b.terms()) both.push_back(t);
        LocalObservable sum(n, 2, both);
        CHECK(sum.local_norm() <= a.local_norm() + b.local_norm() + 1e-10);

        double scale = -0.3 - 2.0 * rng.uniform();
        CHECK(a.scaled(scale).local_norm() ==
              doctest::Approx(std::abs(scale) * a.local_norm()).epsilon(1e-10));
    }
}

TEST_CASE("norm-comparison and centered-sum lemmas on random instances") {
    Rng rng(67);
    for (int trial = 0; trial < 60; ++trial) {
        int n = rng.uniform_int(2, 8);
        int k = rng.uniform_int(1, std::min(3, n));
        LocalObservable h = random_klocal(rng, n, 2, k, n + rng.uniform_int(0, n));
        DenseOperator hf = assemble(h);
        Spectrum sp = herm_spectrum(hf);
        double width = sp.eigenvalues(0) - sp.eigenvalues(sp.eigenvalues.size() - 1);
        // after the symmetrizing shift, 2||H|| equals the spectral width
        CHECK(width <= n * h.local_norm() + 1e-8);

        DenseOperator rho = testing::random_full_state(rng, n);
        LocalObservable c = center(h, rho);
        std::vector<double> site_sum(static_cast<size_t>(n), 0.0);
        for (size_t i = 0; i < c.terms().size(); ++i)
            for (int v : c.terms()[i].sites)
                site_sum[static_cast<size_t>(v)] += c.term_norms()[i];
        for (double s : site_sum) CHECK(s <= h.local_norm() + 1e-8);
    }
}

TEST_CASE("cached local norm is recomputable") {
    Rng rng(71);
    LocalObservable h = random_klocal(rng, 6, 2, 3, 9);
    double recomputed = 0.0;
    std::vector<double> site_sum(6, 0.0);
    for (const auto& t : h.terms()) {
        double norm = operator_norm(Matrix(t.h), true);
        for (int v : t.sites) site_sum[static_cast<size_t>(v)] += norm;
    }
    for (double s : site_sum) recomputed = std::max(recomputed, 2.0 * s);
    CHECK(h.local_norm() == doctest::Approx(recomputed).epsilon(1e-10));
}

TEST_CASE("tfi_chain layout") {
    LocalObservable h = tfi_chain(4, 1.0, 1.0);
    CHECK(h.n() == 4);
    CHECK(h.k() == 2);
    CHECK(h.terms().size() == 7);  // 3 bonds + 4 fields
    CHECK(h.local_norm() == doctest::Approx(6.0));  // bulk site: two bonds + one field
}
