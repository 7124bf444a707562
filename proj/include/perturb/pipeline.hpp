#ifndef PERTURB_PIPELINE_HPP
#define PERTURB_PIPELINE_HPP

#include <stdexcept>

#include "perturb/series.hpp"

namespace perturb {

/// Thrown when a derivation stage fails to reproduce its known closed form.
/// The message carries the polynomial difference. The CLI maps this to a
/// distinct exit code.
struct identity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The truncated equation split by order: leading part
/// leading_numerator / leading_denominator, first-order part
/// first_numerator / first_denominator (the rational prefactor 1/3 is
/// folded into first_numerator).
struct OrderEquations {
    Polynomial leading_numerator;   // y^2 - x^2
    Monomial leading_denominator;   // y^2
    Polynomial first_numerator;     // (3 - n)(y^3 + 2x^3 - 3x^2 y)/3
    Monomial first_denominator;     // y^2
};

/// The first-order balance written as y1' = forcing + gain * y1.
struct PerturbationSplit {
    Polynomial forcing;  // Laurent in {x, y0, n}
    Polynomial gain;     // 2 x^2 y0^-3
};

/// Right-hand-side bracket of the rescaled equation at unit boundary value:
/// (v^(n-2) - z^(n-2))/(n-2) - (v^(n-1) - z^(n-1))/(n-1) with v = 1 + eps*x,
/// z = 1 + eps*y, expanded to the given order. The eps^0 and eps^1
/// coefficients cancel exactly.
EpsSeries build_rhs_series(int order);

/// Divides the bracket by (1/2) eps^2 y^2 (1 + eps*y)^(n-3), truncates at
/// eps^1, and checks the result against its closed form. A mismatch is a
/// hard identity_error carrying the polynomial diff.
OrderEquations derive_order_equations(int order = 3);

/// Substitutes y -> y0 + eps*y1 into the truncated equation and isolates
/// the eps^1 balance as forcing + gain * y1. Nonlinearity in y1 or any
/// mismatch with the closed forms is a hard identity_error.
PerturbationSplit split_perturbation();

}  // namespace perturb

#endif
