#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "perturb/series.hpp"
#include "property_suite.hpp"

using namespace perturb;

namespace {

Polynomial var(Sym s, int e = 1) { return Polynomial::variable(s, e); }

}  // namespace

TEST_CASE("rational arithmetic is exact and canonical") {
    CHECK(Rational(2, 4).str() == "1/2");
    CHECK(Rational(-2, 4).str() == "-1/2");
    CHECK(Rational(2, -4).str() == "-1/2");
    CHECK((Rational(1, 2) + Rational(1, 3)).str() == "5/6");
    CHECK((Rational(1, 3) * Rational(3, 7)).str() == "1/7");
    CHECK((Rational(1, 3) / Rational(1, 3)).is_one());
    CHECK(Rational(0).is_zero());
    CHECK(Rational(7).str() == "7");
    CHECK(Rational(-3, 7).sign() == -1);
    CHECK(Rational(5, 2).to_double() == 2.5);
    CHECK(Rational::factorial(5).str() == "120");
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(Rational(1, 2) / Rational(0), std::invalid_argument);
    CHECK_THROWS_AS(Rational(0).inverse(), std::invalid_argument);
}

TEST_CASE("monomial algebra and rendering") {
    Monomial xy = Monomial::var(Sym::x) * Monomial::var(Sym::y);
    CHECK(xy[Sym::x] == 1);
    CHECK(xy[Sym::y] == 1);
    CHECK(xy.str() == "x*y");
    CHECK(Monomial::one().str() == "1");
    CHECK(Monomial::var(Sym::y0, -3).str() == "y0^-3");
    CHECK(Monomial::var(Sym::x, 2).pow(3) == Monomial::var(Sym::x, 6));
    CHECK(Monomial::var(Sym::x, 2).inverse() == Monomial::var(Sym::x, -2));
    CHECK_THROWS_AS(Monomial::var(Sym::n).inverse(), std::invalid_argument);
    CHECK_THROWS_AS(Monomial::var(Sym::y1).inverse(), std::invalid_argument);
}

TEST_CASE("polynomial invariants: no zero terms, ring exponents guarded") {
    Polynomial p = var(Sym::x) - var(Sym::x);
    CHECK(p.is_zero());
    CHECK(p.term_count() == 0);
    CHECK_THROWS_AS(Polynomial::term(Monomial::var(Sym::n, -1), Rational(1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(Polynomial::term(Monomial::var(Sym::y1, -2), Rational(1)),
                    std::invalid_argument);
    // Laurent directions are allowed.
    CHECK_NOTHROW(Polynomial::term(Monomial::var(Sym::y, -2), Rational(1)));
}

TEST_CASE("polynomial products") {
    CHECK(var(Sym::x) * var(Sym::y) == Polynomial::term(Monomial::var(Sym::x) * Monomial::var(Sym::y), Rational(1)));
    CHECK((var(Sym::x) + var(Sym::y)) * (var(Sym::x) - var(Sym::y)) ==
          var(Sym::x, 2) - var(Sym::y, 2));

    // (y - x)^2 (2x + y) expands to y^3 + 2x^3 - 3x^2 y.
    Polynomial d = var(Sym::y) - var(Sym::x);
    Polynomial expanded = d * d * (var(Sym::x).scaled(Rational(2)) + var(Sym::y));
    Polynomial expected = var(Sym::y, 3) + var(Sym::x, 3).scaled(Rational(2)) -
                          Polynomial::term(Monomial::var(Sym::x, 2) * Monomial::var(Sym::y),
                                           Rational(3));
    CHECK(expanded == expected);
}

TEST_CASE("polynomial n-substitution and degree") {
    // (n - 2)(n - 3) x
    Polynomial p = (var(Sym::n) - Polynomial::constant(Rational(2))) *
                   (var(Sym::n) - Polynomial::constant(Rational(3))) * var(Sym::x);
    CHECK(p.degree_n() == 2);
    CHECK(p.substitute_n(Rational(3)).is_zero());
    CHECK(p.substitute_n(Rational(4)) == var(Sym::x).scaled(Rational(2)));
    CHECK(p.substitute_n(Rational(5, 2)) == var(Sym::x).scaled(Rational(-1, 4)));
}

TEST_CASE("polynomial numeric evaluation handles Laurent exponents") {
    // 2 x^2 y^-3 at x = 3, y = 2 -> 2*9/8
    Polynomial p = Polynomial::term(Monomial::var(Sym::x, 2) * Monomial::var(Sym::y, -3),
                                    Rational(2));
    std::array<double, kSymCount> vals{0.0, 3.0, 2.0, 0.0, 0.0};
    CHECK(p.eval(vals) == doctest::Approx(2.25).epsilon(1e-15));
}

TEST_CASE("deterministic rendering") {
    CHECK(Polynomial::zero().str() == "0");
    CHECK((var(Sym::y, 2) - var(Sym::x, 2)).str() == "-x^2 + y^2");
    CHECK(var(Sym::y0, -2).scaled(Rational(-1, 3)).str() == "-1/3*y0^-2");
    EpsSeries s(2);
    s.set_coeff(0, Polynomial::one());
    s.set_coeff(1, var(Sym::x));
    CHECK(s.str() == "(1) + eps*(x) + O(eps^3)");
    CHECK(EpsSeries(1).str() == "0");
}

TEST_CASE("generalized binomial coefficients") {
    CHECK(generalized_binomial(AffineExponent::n_minus(2), 0).is_one());

    // (n-2)(n-3)/2 = (n^2 - 5n + 6)/2
    Polynomial g2 = generalized_binomial(AffineExponent::n_minus(2), 2);
    Polynomial expected2 = (var(Sym::n, 2) - var(Sym::n).scaled(Rational(5)) +
                            Polynomial::constant(Rational(6)))
                               .scaled(Rational(1, 2));
    CHECK(g2 == expected2);

    // (n-1)(n-2)(n-3)/6
    Polynomial g3 = generalized_binomial(AffineExponent::n_minus(1), 3);
    Polynomial expected3 = ((var(Sym::n) - Polynomial::constant(Rational(1))) *
                            (var(Sym::n) - Polynomial::constant(Rational(2))) *
                            (var(Sym::n) - Polynomial::constant(Rational(3))))
                               .scaled(Rational(1, 6));
    CHECK(g3 == expected3);

    CHECK_THROWS_AS(generalized_binomial(AffineExponent::integer(1), -1), std::invalid_argument);
}

TEST_CASE("binomial expansion") {
    // Integer exponent 1 terminates: 1 + eps x.
    EpsSeries lin = binomial_expand(AffineExponent::integer(1), var(Sym::x), 3);
    CHECK(lin.coeff(0).is_one());
    CHECK(lin.coeff(1) == var(Sym::x));
    CHECK(lin.coeff(2).is_zero());
    CHECK(lin.coeff(3).is_zero());

    // Exponent n-2 over u = x at order 3.
    EpsSeries s = binomial_expand(AffineExponent::n_minus(2), var(Sym::x), 3);
    CHECK(s.coeff(0).is_one());
    CHECK(s.coeff(1) == (var(Sym::n) - Polynomial::constant(Rational(2))) * var(Sym::x));
    CHECK(s.coeff(2) == generalized_binomial(AffineExponent::n_minus(2), 2) * var(Sym::x, 2));
    CHECK(s.coeff(3) == generalized_binomial(AffineExponent::n_minus(2), 3) * var(Sym::x, 3));

    // Exponent n-3 over u = y at order 1.
    EpsSeries t = binomial_expand(AffineExponent::n_minus(3), var(Sym::y), 1);
    CHECK(t.coeff(0).is_one());
    CHECK(t.coeff(1) == (var(Sym::n) - Polynomial::constant(Rational(3))) * var(Sym::y));
}

TEST_CASE("series arithmetic truncates to the shorter operand") {
    EpsSeries a(1);
    a.set_coeff(0, Polynomial::one());
    a.set_coeff(1, var(Sym::x));
    EpsSeries b(3);
    b.set_coeff(0, Polynomial::one());
    b.set_coeff(1, var(Sym::y));

    EpsSeries prod = a * b;
    CHECK(prod.order() == 1);
    CHECK(prod.coeff(0).is_one());
    CHECK(prod.coeff(1) == var(Sym::x) + var(Sym::y));

    EpsSeries a2(2);
    a2.set_coeff(0, Polynomial::one());
    a2.set_coeff(1, var(Sym::x));
    EpsSeries b2(2);
    b2.set_coeff(0, Polynomial::one());
    b2.set_coeff(1, -var(Sym::x));
    EpsSeries diff_sq = a2 * b2;
    CHECK(diff_sq.coeff(0).is_one());
    CHECK(diff_sq.coeff(1).is_zero());
    CHECK(diff_sq.coeff(2) == -var(Sym::x, 2));
}

TEST_CASE("series shift and truncation guards") {
    EpsSeries s(3);
    s.set_coeff(2, var(Sym::x));
    EpsSeries down = s.shifted_down(2);
    CHECK(down.order() == 1);
    CHECK(down.coeff(0) == var(Sym::x));

    EpsSeries bad(2);
    bad.set_coeff(1, var(Sym::y));
    CHECK_THROWS_AS(bad.shifted_down(2), std::invalid_argument);

    CHECK_THROWS_AS(s.truncated(5), std::invalid_argument);
    CHECK_THROWS_AS(s.coeff(4), std::out_of_range);
    CHECK_THROWS_AS(extract_order(s, -1), std::out_of_range);
    CHECK(extract_order(s, 2) == var(Sym::x));
}

TEST_CASE("geometric inversion") {
    EpsSeries one = EpsSeries::from_poly(Polynomial::one(), 3);
    CHECK(geometric_invert(one) == one);

    EpsSeries s(2);
    s.set_coeff(0, Polynomial::one());
    s.set_coeff(1, var(Sym::y));
    EpsSeries inv = geometric_invert(s);
    CHECK(inv.coeff(0).is_one());
    CHECK(inv.coeff(1) == -var(Sym::y));
    CHECK(inv.coeff(2) == var(Sym::y, 2));
    CHECK(inv.truncated(1).coeff(1) == -var(Sym::y));

    EpsSeries bad = EpsSeries::from_poly(var(Sym::x), 2);
    CHECK_THROWS_AS(geometric_invert(bad), std::invalid_argument);
}

TEST_CASE("substitution replaces positive and negative powers") {
    EpsSeries rep(1);
    rep.set_coeff(0, var(Sym::y0));
    rep.set_coeff(1, var(Sym::y1));

    // y^2 -> y0^2 + 2 eps y0 y1
    EpsSeries sq = substitute(EpsSeries::from_poly(var(Sym::y, 2), 1), Sym::y, rep);
    CHECK(sq.coeff(0) == var(Sym::y0, 2));
    CHECK(sq.coeff(1) ==
          Polynomial::term(Monomial::var(Sym::y0) * Monomial::var(Sym::y1), Rational(2)));

    // y^-2 -> y0^-2 - 2 eps y1 y0^-3
    EpsSeries isq = substitute(EpsSeries::from_poly(var(Sym::y, -2), 1), Sym::y, rep);
    CHECK(isq.coeff(0) == var(Sym::y0, -2));
    CHECK(isq.coeff(1) ==
          Polynomial::term(Monomial::var(Sym::y0, -3) * Monomial::var(Sym::y1), Rational(-2)));

    // Untouched symbol.
    EpsSeries just_x = substitute(EpsSeries::from_poly(var(Sym::x), 1), Sym::y, rep);
    CHECK(just_x.coeff(0) == var(Sym::x));
    CHECK(just_x.coeff(1).is_zero());

    // Zero eps^0 coefficient cannot be inverted.
    EpsSeries zero_head(1);
    zero_head.set_coeff(1, var(Sym::y1));
    CHECK_THROWS_AS(substitute(EpsSeries::from_poly(var(Sym::y, -1), 1), Sym::y, zero_head),
                    std::invalid_argument);

    // Multi-term eps^0 coefficient is not a Laurent unit.
    EpsSeries fat_head(1);
    fat_head.set_coeff(0, var(Sym::y0) + var(Sym::x));
    CHECK_THROWS_AS(substitute(EpsSeries::from_poly(var(Sym::y, -1), 1), Sym::y, fat_head),
                    std::invalid_argument);

    // Positive powers tolerate a multi-term head.
    EpsSeries pos = substitute(EpsSeries::from_poly(var(Sym::y, 2), 1), Sym::y, fat_head);
    CHECK(pos.coeff(0) == (var(Sym::y0) + var(Sym::x)) * (var(Sym::y0) + var(Sym::x)));
}

TEST_CASE("synthetic division by (n - c)") {
    Polynomial nm2 = var(Sym::n) - Polynomial::constant(Rational(2));
    Polynomial xmy = var(Sym::x) - var(Sym::y);
    CHECK(poly_div_linear_n(nm2 * xmy, 2) == xmy);

    Polynomial nm3 = var(Sym::n) - Polynomial::constant(Rational(3));
    Polynomial sq = (var(Sym::x, 2) - var(Sym::y, 2)).scaled(Rational(1, 2));
    CHECK(poly_div_linear_n(nm2 * nm3 * sq, 2) == nm3 * sq);

    CHECK_THROWS_AS(poly_div_linear_n(xmy, 2), std::invalid_argument);
    CHECK(poly_div_linear_n(Polynomial::zero(), 5).is_zero());
}

TEST_CASE("randomized algebraic properties") {
    propsuite::Gen gen(20240816u);
    CHECK(propsuite::check_ring_laws(gen, 250) == 250);
    CHECK(propsuite::check_truncation_consistency(gen, 200) == 200);
    CHECK(propsuite::check_inversion(gen, 200) == 200);
    CHECK(propsuite::check_integer_exponent(gen, 150) == 150);
    CHECK(propsuite::check_substitution_identity(gen, 200) == 200);
}
