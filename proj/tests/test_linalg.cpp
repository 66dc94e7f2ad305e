#include <catch2/catch_amalgamated.hpp>

#include "specseq/hamiltonian.hpp"
#include "specseq/linalg.hpp"
#include "specseq/vectorfield.hpp"
#include "test_support.hpp"

using namespace specseq;

TEST_CASE("nullspace basics") {
    TablePtr t = ts::states_params({}, {"A"});
    CHECK(nullspace(ExactMatrix::identity(3, t)).dim() == 0);
    CHECK(nullspace(ExactMatrix(2, 3, t)).dim() == 3);
    // every returned vector really is in the kernel
    std::mt19937 rng(5);
    for (int k = 0; k < 20; ++k) {
        ExactMatrix m(3, 5, t);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 5; ++j) m.at(i, j) = Scalar::of(t, ts::rand_rational(rng));
        SubspaceBasis ns = nullspace(m);
        for (const auto& v : ns.vectors()) CHECK(vec_is_zero(m.apply(v)));
    }
}

TEST_CASE("nullspace of the bracket matrix ad(F_p) at j = p") {
    // n = 2, p = 1: the 6x6 matrix of ad(F_1) on L_1 has the 2-dim kernel
    // spanned by the alpha_i
    TablePtr t = ts::states({"x1", "x2"});
    PolyVectorField fp(t, {parse_polynomial("1/2*x1^2", t), parse_polynomial("1/2*x2^2", t)});
    ExactMatrix m = ad_matrix(fp, 1);
    REQUIRE(m.cols() == 6);
    SubspaceBasis ns = nullspace(m);
    CHECK(ns.dim() == 2);
    ScalarVec a1 = vf_coordinates(
        PolyVectorField(t, {parse_polynomial("x1^2", t), Polynomial(t)}), 1);
    ScalarVec a2 = vf_coordinates(
        PolyVectorField(t, {Polynomial(t), parse_polynomial("x2^2", t)}), 1);
    CHECK(ns.contains(a1));
    CHECK(ns.contains(a2));
}

TEST_CASE("solve_affine") {
    TablePtr t = ts::states_params({}, {"A"});
    ExactMatrix m = ExactMatrix::identity(2, t).scale(Scalar::of(t, 2));
    auto sol = solve_affine(m, {Scalar::of(t, 4), Scalar::of(t, 6)});
    REQUIRE(sol);
    CHECK((*sol)[0] == Scalar::of(t, 2));
    CHECK((*sol)[1] == Scalar::of(t, 3));
    ExactMatrix z(2, 2, t);
    CHECK(!solve_affine(z, {Scalar::of(t, 1), Scalar::zero(t)}));
    CHECK(solve_affine(z, {Scalar::zero(t), Scalar::zero(t)}));
}

TEST_CASE("solve_affine recovers the Example 3.14 correction at A=1, B=9, L=1") {
    // ad(H_0) is injective on cubics here, so the preimage of d_1(K_0) is
    // unique; it is the negative of the correction the extension adds.
    auto tt = std::make_shared<VariableTable>();
    tt->add_state("q1");
    tt->add_state("q2");
    tt->add_state("p1");
    tt->add_state("p2");
    TablePtr t = tt;
    CanonicalChart chart(t, 2);
    Polynomial h0 = parse_polynomial("1/2*p1^2 + 1/2*p2^2 + 1/2*q1^2 + 9/2*q2^2", t);
    auto basis = monomial_basis(t, 3);
    ExactMatrix m(static_cast<int>(basis.size()), static_cast<int>(basis.size()), t);
    std::map<Monomial, int, GrlexBefore> pos;
    for (std::size_t k = 0; k < basis.size(); ++k) pos[basis[k]] = static_cast<int>(k);
    for (std::size_t c = 0; c < basis.size(); ++c) {
        Polynomial img =
            poisson_bracket(h0, Polynomial(t, {{basis[c], GaussianRational(1)}}), chart);
        for (const auto& [mono, sc] : img.state_coefficients())
            m.at(pos.at(mono), static_cast<int>(c)) = Scalar(sc);
    }
    // b = d_1(K_0) = 6 L p2 q1 q2 (A - 4B) at A=1, B=9, L=1
    Polynomial b_poly = parse_polynomial("-210*q1*q2*p2", t);
    ScalarVec b = vec_zero(t, static_cast<int>(basis.size()));
    for (const auto& [mono, sc] : b_poly.state_coefficients()) b[pos.at(mono)] = Scalar(sc);
    auto sol = solve_affine(m, b);
    REQUIRE(sol);
    // the unique preimage is minus the added correction 6L((Bq2^2-p2^2)q1+p2q2p1)
    Polynomial expect = -parse_polynomial("6*((9*q2^2-p2^2)*q1 + p2*q2*p1)", t);
    ScalarVec want = vec_zero(t, static_cast<int>(basis.size()));
    for (const auto& [mono, sc] : expect.state_coefficients()) want[pos.at(mono)] = Scalar(sc);
    CHECK(*sol == want);
    CHECK(nullspace(m).dim() == 0);
}

TEST_CASE("rank-nullity on random matrices over parameter fractions") {
    TablePtr t = ts::states_params({}, {"A", "B"});
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> dim(1, 8);
    for (int k = 0; k < 100; ++k) {
        int r = dim(rng), c = dim(rng);
        ExactMatrix m(r, c, t);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                if (rng() % 3) m.at(i, j) = ts::rand_scalar(rng, t, 1, 1);
        SubspaceBasis ns = nullspace(m);
        CHECK(rank(m) + ns.dim() == c);
        for (const auto& v : ns.vectors()) CHECK(vec_is_zero(m.apply(v)));
    }
}

TEST_CASE("rank is invariant under row permutation") {
    TablePtr t = ts::states_params({}, {"A"});
    std::mt19937 rng(29);
    for (int k = 0; k < 20; ++k) {
        std::vector<ScalarVec> rows;
        for (int i = 0; i < 4; ++i) {
            ScalarVec row;
            for (int j = 0; j < 5; ++j) row.push_back(Scalar::of(t, ts::rand_rational(rng)));
            rows.push_back(row);
        }
        int before = rref(rows).rank;
        std::shuffle(rows.begin(), rows.end(), rng);
        CHECK(rref(rows).rank == before);
    }
}

TEST_CASE("reduce_mod_subspace") {
    TablePtr t = ts::states_params({}, {"A"});
    SubspaceBasis s = SubspaceBasis::span(
        3, t,
        {{Scalar::of(t, 1), Scalar::of(t, 2), Scalar::zero(t)},
         {Scalar::zero(t), Scalar::zero(t), Scalar::of(t, 1)}});
    ScalarVec inside{Scalar::of(t, 2), Scalar::of(t, 4), Scalar::of(t, -3)};
    CHECK(vec_is_zero(reduce_mod_subspace(inside, s)));
    ScalarVec v{Scalar::zero(t), Scalar::of(t, 1), Scalar::zero(t)};
    ScalarVec red = reduce_mod_subspace(v, s);
    CHECK(!vec_is_zero(red));
    // idempotent and linear
    CHECK(reduce_mod_subspace(red, s) == red);
    std::mt19937 rng(31);
    for (int k = 0; k < 20; ++k) {
        ScalarVec a, b;
        for (int j = 0; j < 3; ++j) {
            a.push_back(Scalar::of(t, ts::rand_rational(rng)));
            b.push_back(Scalar::of(t, ts::rand_rational(rng)));
        }
        CHECK(reduce_mod_subspace(vec_add(a, b), s) ==
              vec_add(reduce_mod_subspace(a, s), reduce_mod_subspace(b, s)));
    }
    ScalarVec wrong{Scalar::zero(t), Scalar::zero(t)};
    CHECK_THROWS_AS(reduce_mod_subspace(wrong, s), dimension_mismatch);
}

TEST_CASE("char poly and determinant") {
    TablePtr t = ts::states_params({}, {"A"});
    ExactMatrix m(2, 2, t);
    m.at(0, 0) = Scalar::of(t, 2);
    m.at(0, 1) = Scalar::of(t, 1);
    m.at(1, 1) = Scalar::of(t, 3);
    ScalarVec cp = char_poly(m);  // (x-2)(x-3) = x^2 - 5x + 6
    CHECK(cp[1] == Scalar::of(t, -5));
    CHECK(cp[2] == Scalar::of(t, 6));
    CHECK(determinant(m) == Scalar::of(t, 6));
    auto inv = try_inverse(m);
    REQUIRE(inv);
    CHECK((m * *inv) == ExactMatrix::identity(2, t));
}
