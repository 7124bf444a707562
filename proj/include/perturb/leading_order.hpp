#ifndef PERTURB_LEADING_ORDER_HPP
#define PERTURB_LEADING_ORDER_HPP

#include <complex>
#include <vector>

namespace perturb {

/// Roots of q(F) = F^3 - F^2 + 1: the real root k and the conjugate pair
/// pair_re +- i*pair_im (pair_im > 0).
struct CubicRoots {
    double k = 0.0;
    double pair_re = 0.0;
    double pair_im = 0.0;
};

/// Data for the first integral of the leading-order equation:
/// Phi(X, Y) = X * |F - k|^s1 * exp(2 Re(s2 log(F - r2))), F = Y/X,
/// where s_i = r_i^2 / q'(r_i) are the residue weights of F^2/q(F).
struct FirstIntegral {
    CubicRoots roots;
    double s1 = 0.0;
    std::complex<double> s2;
};

struct XY {
    double x = 0.0;
    double y = 0.0;
};

/// Real root by bisection on the sign-checked bracket (-0.76, -0.75) plus
/// Newton polishing; complex pair from the deflated quadratic
/// F^2 + (k-1)F - 1/k.
CubicRoots solve_leading_cubic();

/// k - (k^2 - 1)/k^2: zero exactly when Y = kX solves the leading equation.
double ray_residual(double k_candidate);

FirstIntegral first_integral(const CubicRoots& roots);

/// Phi as above; constant along solutions of dY/dX = (Y^2 - X^2)/Y^2 and
/// homogeneous of degree 1. Zero when F hits the real root (valid value).
double conserved_quantity(double X, double Y, const FirstIntegral& fi);

/// Adaptive integration of dY/dX = (Y^2 - X^2)/Y^2 from (X0, Y0) to X1.
/// Samples at accepted steps. Y reaching 0 (singular right side) raises an
/// error naming the crossing location.
std::vector<XY> integrate_leading(double X0, double Y0, double X1, double tol);

}  // namespace perturb

#endif
