#ifndef PERTURB_ODE_HPP
#define PERTURB_ODE_HPP

#include <functional>
#include <vector>

namespace perturb::ode {

using Rhs = std::function<double(double, double)>;

enum class Stop {
    reached_end,     // integrated to t1
    hit_lower,       // y crossed options.lower_bound; crossing located
    hit_upper,       // y crossed options.upper_bound; crossing located
    step_underflow,  // step size collapsed below the resolution limit
};

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double max_step = 0.0;      // 0 = no cap beyond the remaining span
    double initial_step = 0.0;  // 0 = automatic
    double lower_bound = 0.0;   // active only when has_lower
    double upper_bound = 0.0;   // active only when has_upper
    bool has_lower = false;
    bool has_upper = false;
};

/// One accepted step's dense-output polynomial, valid for t in
/// [t0, t0 + h] (h carries the integration direction's sign).
struct DenseSegment {
    double t0 = 0.0;
    double h = 0.0;
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0;

    double eval(double t) const {
        double theta = (t - t0) / h;
        double omt = 1.0 - theta;
        return c1 + theta * (c2 + omt * (c3 + theta * (c4 + omt * c5)));
    }
};

struct Result {
    std::vector<double> ts;  // accepted abscissae, first = t0, last = stop point
    std::vector<double> ys;  // solution values at ts
    std::vector<DenseSegment> segments;  // one per accepted step
    Stop stop = Stop::reached_end;

    double t_end() const { return ts.back(); }
    double y_end() const { return ys.back(); }
    /// Continuous solution via dense output; t is clamped to the covered span.
    double evaluate(double t) const;
};

/// Explicit embedded Runge-Kutta 5(4) scalar integrator with fourth-order
/// dense output and adaptive proportional step control. When a bound is
/// active and an accepted step lands beyond it, the crossing is located on
/// the dense polynomial by bisection and the trajectory ends there.
Result integrate(const Rhs& f, double t0, double y0, double t1, const Options& opt);

}  // namespace perturb::ode

#endif
