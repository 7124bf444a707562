#ifndef PERTURB_VALIDATION_HPP
#define PERTURB_VALIDATION_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "perturb/ode.hpp"
#include "perturb/perturbation.hpp"

namespace perturb {

struct ModelParams {
    double p = 0.5;
    int n = 3;
};

/// Throws std::invalid_argument unless 0 < p < 1 and n >= 3.
void validate(const ModelParams& params);

enum class SeedMode { approx, paper };

struct IntegrationConfig {
    double delta = 1e-3;     // seed offset: integration starts at v = p + delta
    double window = 0.1;     // span in v (clipped so v never exceeds 1)
    double local_tol = 1e-10;
    double max_step = 0.0;   // 0 = window/50
    SeedMode seed_mode = SeedMode::approx;
};

/// Throws std::invalid_argument unless delta > 0, window > delta,
/// local_tol in (0, 1e-4], max_step >= 0.
void validate(const IntegrationConfig& config);

enum class StopReason { window_end, z_reached_p, z_reached_0, v_reached_1, step_underflow };

const char* to_string(StopReason reason);

struct SweepRecord {
    double p = 0.0;
    int n = 0;
    double delta = 0.0;
    double window = 0.0;
    double sup_err = 0.0;
    double rms_err = 0.0;
    std::size_t samples = 0;
    StopReason stop_reason = StopReason::window_end;
};

/// Right side of the model equation
///   z' = 2 [ p (v^(n-2) - z^(n-2))/(n-2) - (v^(n-1) - z^(n-1))/(n-1) ]
///        / ((p - z)^2 z^(n-3)).
/// Throws on the singular line z = p and on z <= 0.
double rhs_original(double v, double z, const ModelParams& params);

struct Trajectory {
    ode::Result raw;  // accepted samples and dense segments
    StopReason reason = StopReason::window_end;

    const std::vector<double>& vs() const { return raw.ts; }
    const std::vector<double>& zs() const { return raw.ys; }
    double v_end() const { return raw.t_end(); }
    /// Dense-output evaluation, clamped to the covered span.
    double evaluate(double v) const { return raw.evaluate(v); }
};

/// Integrates the model equation upward from v0 = p + delta with seed
/// z0 = sol(v0) (mode approx) or z0 = p - delta (mode paper). Stops at the
/// window end, at v = 1, on z reaching p or 0 (crossing located on the
/// dense output), or on step underflow; the reason is always recorded.
Trajectory integrate_original(const ModelParams& params, const IntegrationConfig& config,
                              const ApproxSolution& sol);

/// Error of the approximate curve against the numeric trajectory: sup and
/// rms of |z_numeric - approx| over accepted steps plus 64 uniform dense
/// checkpoints. samples counts accepted trajectory points.
SweepRecord compare(const ModelParams& params, const IntegrationConfig& config,
                    const ApproxSolution& sol);
SweepRecord compare(const ModelParams& params, const IntegrationConfig& config,
                    const std::function<double(double)>& approx);

std::vector<double> default_p_grid();  // {0.3, 0.5, 0.7}
std::vector<int> default_n_grid();     // {3, ..., 8}

/// One compare per grid cell; records sorted by (p, n). Integration stop
/// conditions are captured per cell, never aborting the sweep.
std::vector<SweepRecord> sweep(const std::vector<double>& p_values,
                               const std::vector<int>& n_values,
                               const IntegrationConfig& config,
                               Rounding rounding = Rounding::exact);

/// Least-squares slope of log(sup_err) vs log(window) with levels below
/// 100x machine epsilon excluded; fewer than 3 usable levels is an error.
double convergence_order_from_errors(const std::vector<double>& windows,
                                     const std::vector<double>& sup_errs);

/// Measures sup_err at window = base_window/2^j for j = 0..levels-1
/// (delta 1e-3, local_tol 1e-12, seed mode approx) and fits the order.
double convergence_order(const ModelParams& params, const ApproxSolution& sol,
                         double base_window, int levels);
double convergence_order(const ModelParams& params, const std::function<double(double)>& approx,
                         double base_window, int levels);

/// CSV renderings; floats carry 17 significant digits, lines end with LF.
std::string trajectory_csv(const ModelParams& params, const IntegrationConfig& config,
                           const Trajectory& traj, const ApproxSolution& sol);
std::string sweep_csv(const std::vector<SweepRecord>& records);

/// One polyline per p value, sup_err vs n on a log error axis.
std::string sweep_svg(const std::vector<SweepRecord>& records);

}  // namespace perturb

#endif
