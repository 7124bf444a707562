#include "perturb/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace perturb::ode {

namespace {

// Dormand-Prince 5(4) tableau. The last stage row doubles as the 5th-order
// weights (FSAL), e* is the embedded error row, d* the dense-output row.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

double initial_step(const Rhs& f, double t0, double y0, double f0, double dir, double span,
                    const Options& opt) {
    if (opt.initial_step > 0.0) return std::min(opt.initial_step, span);
    double sc = opt.abs_tol + opt.rel_tol * std::abs(y0);
    double d0 = std::abs(y0) / sc;
    double dd1 = std::abs(f0) / sc;
    double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * (d0 / dd1);
    h0 = std::min(h0, span);
    double f1 = f(t0 + dir * h0, y0 + dir * h0 * f0);
    double dd2 = std::abs(f1 - f0) / sc / h0;
    double big = std::max(dd1, dd2);
    double h1 = big <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / big, 0.2);
    double h = std::min({100.0 * h0, h1, span});
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    return h;
}

// Locates P(theta) = bound on the dense polynomial by bisection; the sign
// change over [0, 1] is guaranteed by the caller.
double locate_crossing(const DenseSegment& seg, double bound) {
    double lo = 0.0, hi = 1.0;
    double g_lo = seg.eval(seg.t0) - bound;
    if (g_lo == 0.0) return seg.t0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double g = seg.eval(seg.t0 + mid * seg.h) - bound;
        if (g == 0.0) return seg.t0 + mid * seg.h;
        if ((g > 0.0) == (g_lo > 0.0)) lo = mid; else hi = mid;
    }
    return seg.t0 + 0.5 * (lo + hi) * seg.h;
}

}  // namespace

double Result::evaluate(double t) const {
    if (segments.empty()) return ys.front();
    double dir = segments.front().h > 0.0 ? 1.0 : -1.0;
    double q = std::clamp(t * dir, ts.front() * dir, ts.back() * dir);
    t = q * dir;
    std::size_t lo = 0, hi = segments.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi + 1) / 2;
        if (segments[mid].t0 * dir <= q) lo = mid; else hi = mid - 1;
    }
    return segments[lo].eval(t);
}

Result integrate(const Rhs& f, double t0, double y0, double t1, const Options& opt) {
    if (!std::isfinite(t0) || !std::isfinite(y0) || !std::isfinite(t1))
        throw std::invalid_argument("integrate: non-finite initial data");
    if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0))
        throw std::invalid_argument("integrate: tolerances must be positive");
    if (opt.has_lower && (y0 < opt.lower_bound))
        throw std::invalid_argument("integrate: initial value below lower bound");
    if (opt.has_upper && (y0 > opt.upper_bound))
        throw std::invalid_argument("integrate: initial value above upper bound");

    Result res;
    res.ts.push_back(t0);
    res.ys.push_back(y0);
    if (t0 == t1) return res;

    const double span = std::abs(t1 - t0);
    const double dir = t1 > t0 ? 1.0 : -1.0;
    double t = t0, y = y0;
    double k1 = f(t, y);
    if (!std::isfinite(k1))
        throw std::invalid_argument("integrate: right side not finite at the initial point");

    double h = initial_step(f, t0, y0, k1, dir, span, opt) * dir;

    // The final step is allowed to overshoot t1; the endpoint then comes from
    // dense evaluation. This keeps the accepted-step sequence independent of
    // t1, so runs to nearer targets are exact prefixes of longer runs.
    auto finalize_at = [&res, t1](const DenseSegment& seg) {
        res.ts.push_back(t1);
        res.ys.push_back(seg.eval(t1));
        res.stop = Stop::reached_end;
    };

    for (;;) {
        double hmin = 16.0 * std::numeric_limits<double>::epsilon() *
                      std::max(std::abs(t), span);
        if (std::abs(h) < hmin) {
            res.stop = Stop::step_underflow;
            return res;
        }
        if (opt.max_step > 0.0 && std::abs(h) > opt.max_step) h = opt.max_step * dir;

        double k2 = f(t + c2 * h, y + h * (a21 * k1));
        double k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        double k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        double k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        double k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        double y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        double t_new = t + h;
        double k7 = f(t_new, y_new);

        double err_raw = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y), std::abs(y_new));
        double err = std::abs(err_raw) / sc;
        if (!std::isfinite(y_new) || !std::isfinite(k7)) err = std::numeric_limits<double>::infinity();

        double fac;
        if (!std::isfinite(err)) fac = 0.2;
        else if (err == 0.0) fac = 5.0;
        else fac = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);

        if (!(err <= 1.0)) {
            h *= std::min(fac, 1.0);
            continue;
        }

        DenseSegment seg;
        seg.t0 = t;
        seg.h = h;
        double ydiff = y_new - y;
        seg.c1 = y;
        seg.c2 = ydiff;
        seg.c3 = h * k1 - ydiff;
        seg.c4 = ydiff - h * k7 - seg.c3;
        seg.c5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        res.segments.push_back(seg);

        bool crossed_lower = opt.has_lower && y_new < opt.lower_bound;
        bool crossed_upper = opt.has_upper && y_new > opt.upper_bound;
        if (crossed_lower || crossed_upper) {
            double bound = crossed_lower ? opt.lower_bound : opt.upper_bound;
            double tc = locate_crossing(seg, bound);
            if ((tc - t1) * dir >= 0.0) {
                finalize_at(seg);  // crossing lies at or past the target
                return res;
            }
            res.ts.push_back(tc);
            res.ys.push_back(bound);
            res.stop = crossed_lower ? Stop::hit_lower : Stop::hit_upper;
            return res;
        }

        if ((t_new - t1) * dir >= 0.0) {
            finalize_at(seg);
            return res;
        }

        res.ts.push_back(t_new);
        res.ys.push_back(y_new);
        t = t_new;
        y = y_new;
        k1 = k7;
        h *= fac;
    }
}

}  // namespace perturb::ode
