#ifndef PERTURB_PERTURBATION_HPP
#define PERTURB_PERTURBATION_HPP

namespace perturb {

/// Constants of the correction equation y1' = alpha*x + beta*y1/x obtained
/// by substituting y0 = kx into the first-order balance: A(n) = a_const +
/// a_n*n, alpha = A(n)/(3k^3), beta = 2/k^3.
struct CorrectionCoefficients {
    double alpha = 0.0;
    double beta = 0.0;
    double a_const = 0.0;
    double a_n = 0.0;

    double a_of(double n) const { return a_const + a_n * n; }
};

/// Which constants the composed quadratic uses: exact carries the root k
/// and r = A(n)/(6(k^3-1)) at full precision; paper carries the rounded
/// k = -3/4 and r = 1.012 - 0.3373 n.
enum class Rounding { exact, paper };

/// The composed approximate solution z(v) = p(1 - k + r) + (k - 2r)v +
/// r v^2 / p. Passes through (p, p) with slope k by construction.
struct ApproxSolution {
    double p = 0.0;
    double n = 0.0;
    double k = 0.0;
    double r = 0.0;

    double evaluate(double v) const { return p * (1.0 - k + r) + (k - 2.0 * r) * v + r * v * v / p; }
    double slope(double v) const { return k - 2.0 * r + 2.0 * r * v / p; }
    bool in_domain(double v) const { return v >= p && v <= 1.0; }
};

CorrectionCoefficients correction_coefficients(double n, double k);

/// r such that y1 = r x^2 solves the correction equation (unit boundary
/// value). Among the family r x^2 + c x^(2/k^3) this is the unique member
/// bounded as x -> 0+, since 2/k^3 < 0.
double correction_coefficient_r(double n, double k);

/// Integrates the correction equation from (x0, r*x0^2) to x1 and returns
/// the max relative deviation from r*x^2 over accepted samples (absolute
/// deviation when r = 0).
double verify_particular(double n, double k, double x0, double x1, double tol);

ApproxSolution compose_solution(double p, double n, Rounding rounding = Rounding::exact);

double evaluate(const ApproxSolution& sol, double v);

}  // namespace perturb

#endif
