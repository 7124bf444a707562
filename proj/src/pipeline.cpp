#include "perturb/pipeline.hpp"

namespace perturb {

namespace {

EpsSeries div_coeffs_linear_n(const EpsSeries& s, long c) {
    EpsSeries r(s.order());
    for (int j = 0; j <= s.order(); ++j) r.set_coeff(j, poly_div_linear_n(s.coeff(j), c));
    return r;
}

Polynomial expected_leading_numerator() {
    return Polynomial::variable(Sym::y, 2) - Polynomial::variable(Sym::x, 2);
}

Polynomial expected_first_numerator() {
    // (3 - n)/3 * (y - x)^2 * (2x + y), expanded.
    Polynomial factor = Polynomial::constant(Rational(1)) +
                        Polynomial::term(Monomial::var(Sym::n), Rational(-1, 3));
    Polynomial d = Polynomial::variable(Sym::y) - Polynomial::variable(Sym::x);
    Polynomial s = Polynomial::variable(Sym::x).scaled(Rational(2)) + Polynomial::variable(Sym::y);
    return factor * d * d * s;
}

}  // namespace

EpsSeries build_rhs_series(int order) {
    if (order < 2) throw std::invalid_argument("build_rhs_series: order must be >= 2");
    const Polynomial x = Polynomial::variable(Sym::x);
    const Polynomial y = Polynomial::variable(Sym::y);

    EpsSeries diff2 =
        binomial_expand(AffineExponent::n_minus(2), x, order) -
        binomial_expand(AffineExponent::n_minus(2), y, order);
    EpsSeries diff1 =
        binomial_expand(AffineExponent::n_minus(1), x, order) -
        binomial_expand(AffineExponent::n_minus(1), y, order);

    return div_coeffs_linear_n(diff2, 2) - div_coeffs_linear_n(diff1, 1);
}

OrderEquations derive_order_equations(int order) {
    if (order < 3) throw std::invalid_argument("derive_order_equations: order must be >= 3");

    EpsSeries bracket = build_rhs_series(order);
    // bracket / ((1/2) eps^2 y^2 (1+eps*y)^(n-3)): the eps^-2 shift is legal
    // because the two lowest coefficients cancel.
    EpsSeries shifted = bracket.scaled(Rational(2)).shifted_down(2);
    EpsSeries denominator =
        binomial_expand(AffineExponent::n_minus(3), Polynomial::variable(Sym::y), shifted.order());
    EpsSeries full = (shifted * geometric_invert(denominator))
                         .times_poly(Polynomial::variable(Sym::y, -2));
    EpsSeries truncated = full.truncated(1);

    const Monomial y2 = Monomial::var(Sym::y, 2);
    OrderEquations oe;
    oe.leading_numerator = truncated.coeff(0).times_monomial(y2);
    oe.leading_denominator = y2;
    oe.first_numerator = truncated.coeff(1).times_monomial(y2);
    oe.first_denominator = y2;

    Polynomial lead_diff = oe.leading_numerator - expected_leading_numerator();
    if (!lead_diff.is_zero())
        throw identity_error("derive_order_equations: leading part differs from closed form by " +
                             lead_diff.str());
    Polynomial first_diff = oe.first_numerator - expected_first_numerator();
    if (!first_diff.is_zero())
        throw identity_error("derive_order_equations: first part differs from closed form by " +
                             first_diff.str());
    return oe;
}

PerturbationSplit split_perturbation() {
    OrderEquations oe = derive_order_equations();

    const Monomial y_inv2 = oe.leading_denominator.inverse();
    EpsSeries equation(1);
    equation.set_coeff(0, oe.leading_numerator.times_monomial(y_inv2));
    equation.set_coeff(1, oe.first_numerator.times_monomial(y_inv2));

    EpsSeries replacement(1);
    replacement.set_coeff(0, Polynomial::variable(Sym::y0));
    replacement.set_coeff(1, Polynomial::variable(Sym::y1));

    EpsSeries balanced = substitute(equation, Sym::y, replacement);

    // eps^0 balance must be the leading equation with y renamed to y0.
    Polynomial expected0 =
        Polynomial::one() -
        Polynomial::term(Monomial::var(Sym::x, 2) * Monomial::var(Sym::y0, -2), Rational(1));
    Polynomial diff0 = balanced.coeff(0) - expected0;
    if (!diff0.is_zero())
        throw identity_error("split_perturbation: eps^0 balance differs from leading form by " +
                             diff0.str());

    PerturbationSplit split;
    for (const auto& [m, c] : balanced.coeff(1).terms()) {
        int e1 = m[Sym::y1];
        if (e1 == 0) {
            split.forcing.add_term(m, c);
        } else if (e1 == 1) {
            Monomial rest = m;
            rest[Sym::y1] = 0;
            split.gain.add_term(rest, c);
        } else {
            throw identity_error("split_perturbation: nonlinear in y1, term " + m.str());
        }
    }

    Polynomial expected_gain = Polynomial::term(
        Monomial::var(Sym::x, 2) * Monomial::var(Sym::y0, -3), Rational(2));
    Polynomial gain_diff = split.gain - expected_gain;
    if (!gain_diff.is_zero())
        throw identity_error("split_perturbation: gain differs from closed form by " +
                             gain_diff.str());

    // ((6-2n)x^3 y0 + (3n-9)x^2 y0^2 + (3-n)y0^4) / (3 y0^3), termwise.
    Polynomial expected_forcing;
    {
        Monomial x3y0m2 = Monomial::var(Sym::x, 3) * Monomial::var(Sym::y0, -2);
        expected_forcing.add_term(x3y0m2, Rational(2));
        expected_forcing.add_term(x3y0m2 * Monomial::var(Sym::n), Rational(-2, 3));
        Monomial x2y0m1 = Monomial::var(Sym::x, 2) * Monomial::var(Sym::y0, -1);
        expected_forcing.add_term(x2y0m1 * Monomial::var(Sym::n), Rational(1));
        expected_forcing.add_term(x2y0m1, Rational(-3));
        Monomial y0 = Monomial::var(Sym::y0);
        expected_forcing.add_term(y0, Rational(1));
        expected_forcing.add_term(y0 * Monomial::var(Sym::n), Rational(-1, 3));
    }
    Polynomial forcing_diff = split.forcing - expected_forcing;
    if (!forcing_diff.is_zero())
        throw identity_error("split_perturbation: forcing differs from closed form by " +
                             forcing_diff.str());
    return split;
}

}  // namespace perturb
