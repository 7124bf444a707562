#include "perturb/leading_order.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "perturb/ode.hpp"

namespace perturb {

namespace {

double cubic(double f) { return (f - 1.0) * f * f + 1.0; }
double cubic_deriv(double f) { return (3.0 * f - 2.0) * f; }

}  // namespace

CubicRoots solve_leading_cubic() {
    double a = -0.76, b = -0.75;
    if (!(cubic(a) < 0.0 && cubic(b) > 0.0))
        throw std::logic_error("solve_leading_cubic: bracket lost its sign change");
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (a + b);
        (cubic(mid) < 0.0 ? a : b) = mid;
    }
    double k = 0.5 * (a + b);
    for (int i = 0; i < 4; ++i) k -= cubic(k) / cubic_deriv(k);

    CubicRoots roots;
    roots.k = k;
    // Deflated quadratic F^2 + (k-1)F - 1/k.
    roots.pair_re = 0.5 * (1.0 - k);
    roots.pair_im = std::sqrt(-1.0 / k - 0.25 * (k - 1.0) * (k - 1.0));
    return roots;
}

double ray_residual(double k_candidate) {
    if (k_candidate == 0.0) throw std::invalid_argument("ray_residual: zero slope");
    return k_candidate - (k_candidate * k_candidate - 1.0) / (k_candidate * k_candidate);
}

FirstIntegral first_integral(const CubicRoots& roots) {
    FirstIntegral fi;
    fi.roots = roots;
    fi.s1 = roots.k * roots.k / cubic_deriv(roots.k);
    std::complex<double> r2(roots.pair_re, roots.pair_im);
    fi.s2 = r2 * r2 / (r2 * (3.0 * r2 - 2.0));
    return fi;
}

double conserved_quantity(double X, double Y, const FirstIntegral& fi) {
    if (X == 0.0) throw std::domain_error("conserved_quantity: X must be nonzero");
    double F = Y / X;
    double real_factor = std::pow(std::abs(F - fi.roots.k), fi.s1);
    std::complex<double> r2(fi.roots.pair_re, fi.roots.pair_im);
    double pair_factor = std::exp(2.0 * std::real(fi.s2 * std::log(std::complex<double>(F) - r2)));
    return X * real_factor * pair_factor;
}

std::vector<XY> integrate_leading(double X0, double Y0, double X1, double tol) {
    if (Y0 == 0.0) throw std::invalid_argument("integrate_leading: Y0 must be nonzero");
    if (X0 == 0.0 || X1 == 0.0 || (X0 > 0.0) != (X1 > 0.0))
        throw std::invalid_argument("integrate_leading: X0 and X1 must share a sign");
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_leading: tol must be positive");

    if (X0 == X1) return {XY{X0, Y0}};

    auto rhs = [](double x, double y) { return (y * y - x * x) / (y * y); };
    ode::Options opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol * 0.1 * std::abs(Y0);
    if (Y0 > 0.0) {
        opt.has_lower = true;
        opt.lower_bound = 0.0;
    } else {
        opt.has_upper = true;
        opt.upper_bound = 0.0;
    }

    ode::Result res = ode::integrate(rhs, X0, Y0, X1, opt);
    if (res.stop == ode::Stop::hit_lower || res.stop == ode::Stop::hit_upper)
        throw std::runtime_error("integrate_leading: Y reached 0 near X = " +
                                 std::to_string(res.t_end()) + " (equation singular there)");
    if (res.stop == ode::Stop::step_underflow)
        throw std::runtime_error("integrate_leading: step size underflow near X = " +
                                 std::to_string(res.t_end()));

    std::vector<XY> samples;
    samples.reserve(res.ts.size());
    for (std::size_t i = 0; i < res.ts.size(); ++i) samples.push_back(XY{res.ts[i], res.ys[i]});
    return samples;
}

}  // namespace perturb
