#include "perturb/perturbation.hpp"

#include <cmath>
#include <stdexcept>

#include "perturb/leading_order.hpp"
#include "perturb/ode.hpp"

namespace perturb {

CorrectionCoefficients correction_coefficients(double n, double k) {
    if (!(n >= 3.0)) throw std::invalid_argument("correction_coefficients: n must be >= 3");
    double k2 = k * k, k3 = k2 * k, k4 = k2 * k2;
    CorrectionCoefficients cc;
    cc.a_const = 6.0 * k - 9.0 * k2 + 3.0 * k4;
    cc.a_n = -2.0 * k + 3.0 * k2 - k4;
    cc.alpha = cc.a_of(n) / (3.0 * k3);
    cc.beta = 2.0 / k3;
    return cc;
}

double correction_coefficient_r(double n, double k) {
    if (!(n >= 3.0)) throw std::invalid_argument("correction_coefficient_r: n must be >= 3");
    CorrectionCoefficients cc = correction_coefficients(n, k);
    double k3 = k * k * k;
    return cc.a_of(n) / (6.0 * (k3 - 1.0));
}

double verify_particular(double n, double k, double x0, double x1, double tol) {
    if (!(0.0 < x0 && x0 < x1))
        throw std::invalid_argument("verify_particular: need 0 < x0 < x1");
    if (!(tol > 0.0)) throw std::invalid_argument("verify_particular: tol must be positive");

    CorrectionCoefficients cc = correction_coefficients(n, k);
    double r = correction_coefficient_r(n, k);

    auto rhs = [&cc](double x, double y) { return cc.alpha * x + cc.beta * y / x; };
    ode::Options opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol * x0 * x0 * std::max(std::abs(r), 1.0);
    ode::Result res = ode::integrate(rhs, x0, r * x0 * x0, x1, opt);

    double worst = 0.0;
    for (std::size_t i = 0; i < res.ts.size(); ++i) {
        double expected = r * res.ts[i] * res.ts[i];
        double dev = std::abs(res.ys[i] - expected);
        if (r != 0.0) dev /= std::abs(expected);
        worst = std::max(worst, dev);
    }
    return worst;
}

ApproxSolution compose_solution(double p, double n, Rounding rounding) {
    if (!(0.0 < p && p < 1.0)) throw std::invalid_argument("compose_solution: p must be in (0, 1)");
    if (!(n >= 3.0)) throw std::invalid_argument("compose_solution: n must be >= 3");

    ApproxSolution sol;
    sol.p = p;
    sol.n = n;
    if (rounding == Rounding::exact) {
        sol.k = solve_leading_cubic().k;
        sol.r = correction_coefficient_r(n, sol.k);
    } else {
        sol.k = -0.75;
        sol.r = 1.012 - 0.3373 * n;
    }
    return sol;
}

double evaluate(const ApproxSolution& sol, double v) { return sol.evaluate(v); }

}  // namespace perturb
