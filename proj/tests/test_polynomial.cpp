#include <catch2/catch_amalgamated.hpp>

#include "specseq/vectorfield.hpp"
#include "test_support.hpp"

using namespace specseq;

namespace {
TablePtr hh_table() {
    auto t = std::make_shared<VariableTable>();
    t->add_state("q1");
    t->add_state("q2");
    t->add_state("p1");
    t->add_state("p2");
    t->add_param("A");
    t->add_param("B");
    t->add_param("L");
    return t;
}
}  // namespace

TEST_CASE("parsing the grammar") {
    TablePtr t = ts::states_params({"x1", "x2"}, {"L"});
    Polynomial p = parse_polynomial("3/2*x1^2*x2 - x2", t);
    CHECK(p.term_count() == 2);
    CHECK(p.coefficient(Monomial::var(0, 2) * Monomial::var(1)) ==
          GaussianRational(BigRational(3, 2)));
    CHECK_THROWS_AS(parse_polynomial("x1 + * x2", t), syntax_error);
    CHECK_THROWS_AS(parse_polynomial("y1", t), unknown_variable);
    CHECK(parse_polynomial("(x1 + x2)*(x1 + x2)", t) ==
          parse_polynomial("x1^2 + 2*x1*x2 + x2^2", t));
    CHECK(parse_polynomial("i^2", t) == parse_polynomial("0 - 1", t));
    // parenthesized factors take no exponent under the grammar
    CHECK_THROWS_AS(parse_polynomial("(x1 + x2)^2", t), syntax_error);

    TablePtr hh = hh_table();
    Polynomial cubic = parse_polynomial("1/3*q1^3 + L*q1*q2^2", hh);
    CHECK(cubic.state_degree() == 3);
    CHECK(cubic.term_count() == 2);
}

TEST_CASE("print/parse round trip on random polynomials") {
    TablePtr t = ts::states_params({"x1", "x2", "x3"}, {"A", "B"});
    std::mt19937 rng(11);
    for (int k = 0; k < 60; ++k) {
        Polynomial p = ts::rand_poly(rng, t, 4, 5, true);
        CHECK(parse_polynomial(p.str(), t) == p);
    }
}

TEST_CASE("ring axioms on random triples") {
    TablePtr t = ts::states_params({"x1", "x2"}, {"A"});
    std::mt19937 rng(3);
    for (int k = 0; k < 200; ++k) {
        Polynomial a = ts::rand_poly(rng, t, 3, 3, true);
        Polynomial b = ts::rand_poly(rng, t, 3, 3, true);
        Polynomial c = ts::rand_poly(rng, t, 3, 3, true);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK(a + b == b + a);
    }
}

TEST_CASE("square-root bindings reduce and the reduction is idempotent") {
    auto tt = std::make_shared<VariableTable>();
    tt->add_state("x");
    tt->add_param("A");
    tt->add_param("a");
    tt->bind_sqrt("a", "A");
    TablePtr t = tt;
    Polynomial a = Polynomial::variable(t, "a");
    Polynomial A = Polynomial::variable(t, "A");
    CHECK(a * a == A);
    CHECK(a * a * a == A * a);
    Polynomial reduced = (a * a + a).pow(2);  // already canonical
    CHECK(Polynomial(t, {reduced.terms().begin(), reduced.terms().end()}) == reduced);
}

TEST_CASE("partial derivatives") {
    TablePtr t = hh_table();
    CHECK(parse_polynomial("q1^2*q2", t).derivative("q1") == parse_polynomial("2*q1*q2", t));
    CHECK(parse_polynomial("L*q1*q2^2", t).derivative("q1") == parse_polynomial("L*q2^2", t));
    CHECK(parse_polynomial("5", t).derivative("q1").is_zero());
    CHECK_THROWS_AS(parse_polynomial("L", t).derivative(t->index_of("L")), not_a_state_variable);
}

TEST_CASE("homogeneous components by STATE degree") {
    TablePtr t = hh_table();
    Polynomial p = parse_polynomial("q1^2 + q1", t);
    auto comps = p.homogeneous_components();
    REQUIRE(comps.size() == 2);
    CHECK(comps.at(2) == parse_polynomial("q1^2", t));
    CHECK(comps.at(1) == parse_polynomial("q1", t));

    Polynomial H = parse_polynomial(
        "1/2*p1^2 + 1/2*p2^2 + 1/2*A*q1^2 + 1/2*B*q2^2 + 1/3*q1^3 + L*q1*q2^2", t);
    auto hc = H.homogeneous_components();
    REQUIRE(hc.size() == 2);
    CHECK(hc.at(2) == parse_polynomial("1/2*p1^2 + 1/2*p2^2 + 1/2*A*q1^2 + 1/2*B*q2^2", t));
    CHECK(hc.at(3) == parse_polynomial("1/3*q1^3 + L*q1*q2^2", t));
    CHECK(Polynomial(t).homogeneous_components().empty());

    Polynomial sum(t);
    for (const auto& [d, c] : hc) sum += c;
    CHECK(sum == H);
}

TEST_CASE("linear substitution") {
    TablePtr t = ts::states({"q1", "q2"});
    Polynomial p = parse_polynomial("q1^2", t);
    std::map<int, Polynomial> images{{0, parse_polynomial("q1 + q2", t)},
                                     {1, parse_polynomial("q2", t)}};
    CHECK(p.substitute(images, t) == parse_polynomial("q1^2 + 2*q1*q2 + q2^2", t));
    std::map<int, Polynomial> ident{{0, Polynomial::variable(t, 0)},
                                    {1, Polynomial::variable(t, 1)}};
    Polynomial q = parse_polynomial("q1^2*q2 - 3*q2", t);
    CHECK(q.substitute(ident, t) == q);
    std::map<int, Polynomial> missing{{0, Polynomial::variable(t, 0)}};
    CHECK_THROWS_AS(q.substitute(missing, t), missing_image);
}

TEST_CASE("monomial bases are deterministic graded-lex") {
    TablePtr t = ts::states({"x1", "x2"});
    auto b2 = monomial_basis(t, 2);
    REQUIRE(b2.size() == 3);
    CHECK(Polynomial(t, {{b2[0], GaussianRational(1)}}).str() == "x1^2");
    CHECK(Polynomial(t, {{b2[1], GaussianRational(1)}}).str() == "x1*x2");
    CHECK(Polynomial(t, {{b2[2], GaussianRational(1)}}).str() == "x2^2");
    CHECK(monomial_basis(t, 0).size() == 1);
    CHECK(vf_level_basis(t, 1).size() == 6);  // column(2), degree 2

    TablePtr t3 = ts::states({"x1", "x2", "x3"});
    // count C(d+s-1, s-1)
    CHECK(monomial_basis(t3, 4).size() == 15);
}
