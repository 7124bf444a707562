#include "perturb/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

namespace perturb {

namespace {

double ipow(double base, int e) {
    if (e < 0) return 1.0 / ipow(base, -e);
    double r = 1.0;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

// Algebraic form of the right side, defined wherever the denominator is
// nonzero; the integrator probes it freely and relies on step rejection
// plus bound stops instead of exceptions.
double rhs_unguarded(double v, double z, double p, int n) {
    double num = 2.0 * (p * (ipow(v, n - 2) - ipow(z, n - 2)) / (n - 2) -
                        (ipow(v, n - 1) - ipow(z, n - 1)) / (n - 1));
    double den = (p - z) * (p - z) * ipow(z, n - 3);
    return num / den;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct ErrorStats {
    double sup = 0.0;
    double rms = 0.0;
};

ErrorStats error_stats(const Trajectory& traj, const std::function<double(double)>& approx) {
    double sup = 0.0, sumsq = 0.0;
    std::size_t count = 0;
    auto take = [&](double v, double z) {
        double e = std::abs(z - approx(v));
        sup = std::max(sup, e);
        sumsq += e * e;
        ++count;
    };
    for (std::size_t i = 0; i < traj.vs().size(); ++i) take(traj.vs()[i], traj.zs()[i]);
    double v0 = traj.vs().front(), v1 = traj.v_end();
    for (int i = 0; i < 64; ++i) {
        double v = v0 + (v1 - v0) * (i + 1) / 65.0;
        take(v, traj.evaluate(v));
    }
    return ErrorStats{sup, std::sqrt(sumsq / static_cast<double>(count))};
}

Trajectory integrate_with_seed(const ModelParams& params, const IntegrationConfig& config,
                               double z0) {
    const double p = params.p;
    const int n = params.n;
    const double v0 = p + config.delta;

    if (!(z0 > 0.0 && z0 < p))
        throw std::invalid_argument("integrate_original: seed z0 = " + std::to_string(z0) +
                                    " outside (0, p)");

    double v_target = p + config.window;
    bool clipped = false;
    if (v_target >= 1.0) {
        v_target = 1.0;
        clipped = true;
    }
    if (!(v0 < v_target))
        throw std::invalid_argument("integrate_original: seed v0 = " + std::to_string(v0) +
                                    " at or beyond the integration target");

    ode::Options opt;
    opt.rel_tol = config.local_tol;
    opt.abs_tol = config.local_tol;
    opt.max_step = config.max_step > 0.0 ? config.max_step : config.window / 50.0;
    opt.has_lower = true;
    opt.lower_bound = 0.0;
    opt.has_upper = true;
    opt.upper_bound = p;

    Trajectory traj;
    traj.raw = ode::integrate([p, n](double v, double z) { return rhs_unguarded(v, z, p, n); },
                              v0, z0, v_target, opt);
    switch (traj.raw.stop) {
        case ode::Stop::reached_end:
            traj.reason = clipped ? StopReason::v_reached_1 : StopReason::window_end;
            break;
        case ode::Stop::hit_upper: traj.reason = StopReason::z_reached_p; break;
        case ode::Stop::hit_lower: traj.reason = StopReason::z_reached_0; break;
        case ode::Stop::step_underflow: traj.reason = StopReason::step_underflow; break;
    }
    return traj;
}

SweepRecord compare_with(const ModelParams& params, const IntegrationConfig& config,
                         const std::function<double(double)>& approx) {
    validate(params);
    validate(config);
    double z0 = config.seed_mode == SeedMode::approx ? approx(params.p + config.delta)
                                                     : params.p - config.delta;
    Trajectory traj = integrate_with_seed(params, config, z0);
    ErrorStats stats = error_stats(traj, approx);

    SweepRecord rec;
    rec.p = params.p;
    rec.n = params.n;
    rec.delta = config.delta;
    rec.window = config.window;
    rec.sup_err = stats.sup;
    rec.rms_err = stats.rms;
    rec.samples = traj.vs().size();
    rec.stop_reason = traj.reason;
    return rec;
}

}  // namespace

void validate(const ModelParams& params) {
    if (!(params.p > 0.0 && params.p < 1.0))
        throw std::invalid_argument("ModelParams: p must lie in (0, 1)");
    if (params.n < 3) throw std::invalid_argument("ModelParams: n must be >= 3");
}

void validate(const IntegrationConfig& config) {
    if (!(config.delta > 0.0)) throw std::invalid_argument("IntegrationConfig: delta must be > 0");
    if (!(config.window > config.delta))
        throw std::invalid_argument("IntegrationConfig: window must exceed delta");
    if (!(config.local_tol > 0.0 && config.local_tol <= 1e-4))
        throw std::invalid_argument("IntegrationConfig: local_tol must lie in (0, 1e-4]");
    if (!(config.max_step >= 0.0))
        throw std::invalid_argument("IntegrationConfig: max_step must be >= 0");
}

const char* to_string(StopReason reason) {
    switch (reason) {
        case StopReason::window_end: return "window_end";
        case StopReason::z_reached_p: return "z_reached_p";
        case StopReason::z_reached_0: return "z_reached_0";
        case StopReason::v_reached_1: return "v_reached_1";
        case StopReason::step_underflow: return "step_underflow";
    }
    throw std::logic_error("to_string: bad StopReason");
}

double rhs_original(double v, double z, const ModelParams& params) {
    validate(params);
    if (z == params.p) throw std::domain_error("rhs_original: z = p is singular");
    if (z <= 0.0) throw std::domain_error("rhs_original: z must be positive");
    return rhs_unguarded(v, z, params.p, params.n);
}

Trajectory integrate_original(const ModelParams& params, const IntegrationConfig& config,
                              const ApproxSolution& sol) {
    validate(params);
    validate(config);
    double z0 = config.seed_mode == SeedMode::approx ? sol.evaluate(params.p + config.delta)
                                                     : params.p - config.delta;
    return integrate_with_seed(params, config, z0);
}

SweepRecord compare(const ModelParams& params, const IntegrationConfig& config,
                    const ApproxSolution& sol) {
    return compare_with(params, config, [&sol](double v) { return sol.evaluate(v); });
}

SweepRecord compare(const ModelParams& params, const IntegrationConfig& config,
                    const std::function<double(double)>& approx) {
    return compare_with(params, config, approx);
}

std::vector<double> default_p_grid() { return {0.3, 0.5, 0.7}; }

std::vector<int> default_n_grid() { return {3, 4, 5, 6, 7, 8}; }

std::vector<SweepRecord> sweep(const std::vector<double>& p_values,
                               const std::vector<int>& n_values,
                               const IntegrationConfig& config, Rounding rounding) {
    std::vector<SweepRecord> records;
    records.reserve(p_values.size() * n_values.size());
    for (double p : p_values)
        for (int n : n_values) {
            ModelParams params{p, n};
            ApproxSolution sol = compose_solution(p, static_cast<double>(n), rounding);
            records.push_back(compare(params, config, sol));
        }
    std::sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
        return a.p != b.p ? a.p < b.p : a.n < b.n;
    });
    return records;
}

double convergence_order_from_errors(const std::vector<double>& windows,
                                     const std::vector<double>& sup_errs) {
    if (windows.size() != sup_errs.size())
        throw std::invalid_argument("convergence_order_from_errors: length mismatch");
    const double floor_err = 100.0 * std::numeric_limits<double>::epsilon();
    std::vector<double> lw, le;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (sup_errs[i] < floor_err) continue;  // integrator noise, not model error
        lw.push_back(std::log(windows[i]));
        le.push_back(std::log(sup_errs[i]));
    }
    if (lw.size() < 3)
        throw std::runtime_error("convergence_order: only " + std::to_string(lw.size()) +
                                 " usable levels after excluding " +
                                 std::to_string(windows.size() - lw.size()) +
                                 " at the error floor");
    double mw = 0.0, me = 0.0;
    for (std::size_t i = 0; i < lw.size(); ++i) {
        mw += lw[i];
        me += le[i];
    }
    mw /= static_cast<double>(lw.size());
    me /= static_cast<double>(lw.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lw.size(); ++i) {
        num += (lw[i] - mw) * (le[i] - me);
        den += (lw[i] - mw) * (lw[i] - mw);
    }
    return num / den;
}

namespace {

double convergence_order_impl(const ModelParams& params,
                              const std::function<double(double)>& approx, double base_window,
                              int levels) {
    if (levels < 3) throw std::invalid_argument("convergence_order: levels must be >= 3");
    std::vector<double> windows, errs;
    for (int j = 0; j < levels; ++j) {
        IntegrationConfig config;
        config.window = base_window / std::pow(2.0, j);
        config.local_tol = 1e-12;
        // Same step cap at every level: trajectories to nearer window ends
        // are then exact prefixes and self-comparison error is exactly zero.
        config.max_step = base_window / 50.0;
        if (!(config.window > config.delta))
            throw std::invalid_argument("convergence_order: window shrank to the seed offset");
        SweepRecord rec = compare_with(params, config, approx);
        windows.push_back(config.window);
        errs.push_back(rec.sup_err);
    }
    return convergence_order_from_errors(windows, errs);
}

}  // namespace

double convergence_order(const ModelParams& params, const ApproxSolution& sol, double base_window,
                         int levels) {
    return convergence_order_impl(
        params, [&sol](double v) { return sol.evaluate(v); }, base_window, levels);
}

double convergence_order(const ModelParams& params, const std::function<double(double)>& approx,
                         double base_window, int levels) {
    return convergence_order_impl(params, approx, base_window, levels);
}

std::string trajectory_csv(const ModelParams& params, const IntegrationConfig& config,
                           const Trajectory& traj, const ApproxSolution& sol) {
    // Checkpoints = accepted samples plus 64 uniform dense points, sorted.
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < traj.vs().size(); ++i)
        points.emplace_back(traj.vs()[i], traj.zs()[i]);
    double v0 = traj.vs().front(), v1 = traj.v_end();
    for (int i = 0; i < 64; ++i) {
        double v = v0 + (v1 - v0) * (i + 1) / 65.0;
        points.emplace_back(v, traj.evaluate(v));
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end(),
                             [](const auto& a, const auto& b) { return a.first == b.first; }),
                 points.end());

    std::string out = "p,n,delta,v,z_numeric,z_approx,abs_err\n";
    for (const auto& [v, z] : points) {
        double za = sol.evaluate(v);
        out += fmt(params.p) + "," + std::to_string(params.n) + "," + fmt(config.delta) + "," +
               fmt(v) + "," + fmt(z) + "," + fmt(za) + "," + fmt(std::abs(z - za)) + "\n";
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepRecord>& records) {
    std::string out = "p,n,delta,window,sup_err,rms_err,samples,stop_reason\n";
    for (const SweepRecord& r : records) {
        out += fmt(r.p) + "," + std::to_string(r.n) + "," + fmt(r.delta) + "," + fmt(r.window) +
               "," + fmt(r.sup_err) + "," + fmt(r.rms_err) + "," + std::to_string(r.samples) +
               "," + to_string(r.stop_reason) + "\n";
    }
    return out;
}

std::string sweep_svg(const std::vector<SweepRecord>& records) {
    if (records.empty()) throw std::invalid_argument("sweep_svg: no records");

    std::map<double, std::vector<std::pair<int, double>>> by_p;
    int n_min = records.front().n, n_max = records.front().n;
    double log_min = 400.0, log_max = -400.0;
    for (const SweepRecord& r : records) {
        double e = std::max(r.sup_err, 1e-16);  // log axis floor
        by_p[r.p].emplace_back(r.n, e);
        n_min = std::min(n_min, r.n);
        n_max = std::max(n_max, r.n);
        log_min = std::min(log_min, std::log10(e));
        log_max = std::max(log_max, std::log10(e));
    }
    log_min = std::floor(log_min);
    log_max = std::ceil(log_max);
    if (log_max <= log_min) log_max = log_min + 1.0;

    const double width = 640.0, height = 420.0;
    const double ml = 80.0, mr = 150.0, mt = 40.0, mb = 50.0;
    auto xpix = [&](double n) {
        if (n_max == n_min) return ml + (width - ml - mr) / 2.0;
        return ml + (n - n_min) / (n_max - n_min) * (width - ml - mr);
    };
    auto ypix = [&](double loge) {
        return height - mb - (loge - log_min) / (log_max - log_min) * (height - mt - mb);
    };
    auto num = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", x);
        return std::string(buf);
    };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
         "viewBox=\"0 0 640 420\">\n";
    s += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(width / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">sup error of the approximate solution vs "
         "n</text>\n";

    // Axes.
    s += "<line x1=\"" + num(ml) + "\" y1=\"" + num(height - mb) + "\" x2=\"" +
         num(width - mr) + "\" y2=\"" + num(height - mb) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(ml) + "\" y2=\"" +
         num(height - mb) + "\" stroke=\"black\"/>\n";
    for (int n = n_min; n <= n_max; ++n) {
        double x = xpix(n);
        s += "<line x1=\"" + num(x) + "\" y1=\"" + num(height - mb) + "\" x2=\"" + num(x) +
             "\" y2=\"" + num(height - mb + 5) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(x) + "\" y=\"" + num(height - mb + 20) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
             std::to_string(n) + "</text>\n";
    }
    for (double d = log_min; d <= log_max + 0.5; d += 1.0) {
        double y = ypix(d);
        s += "<line x1=\"" + num(ml - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(ml) +
             "\" y2=\"" + num(y) + "\" stroke=\"black\"/>\n";
        char lab[32];
        std::snprintf(lab, sizeof lab, "1e%+03d", static_cast<int>(d));
        s += "<text x=\"" + num(ml - 9) + "\" y=\"" + num(y + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + lab +
             "</text>\n";
    }
    s += "<text x=\"" + num((ml + width - mr) / 2) + "\" y=\"" + num(height - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">n</text>\n";

    int color_idx = 0;
    for (auto& [p, pts] : by_p) {
        std::sort(pts.begin(), pts.end());
        const char* color = palette[color_idx % 5];
        std::string poly;
        for (const auto& [n, e] : pts) {
            poly += num(xpix(n)) + "," + num(ypix(std::log10(e))) + " ";
        }
        s += "<polyline points=\"" + poly + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"2\"/>\n";
        for (const auto& [n, e] : pts) {
            s += "<circle cx=\"" + num(xpix(n)) + "\" cy=\"" + num(ypix(std::log10(e))) +
                 "\" r=\"3\" fill=\"" + color + "\"/>\n";
        }
        char lab[32];
        std::snprintf(lab, sizeof lab, "p = %g", p);
        double ly = mt + 20.0 * color_idx;
        s += "<line x1=\"" + num(width - mr + 10) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
             num(width - mr + 30) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + num(width - mr + 36) + "\" y=\"" + num(ly) +
             "\" font-family=\"sans-serif\" font-size=\"12\">" + lab + "</text>\n";
        ++color_idx;
    }
    s += "</svg>\n";
    return s;
}

}  // namespace perturb
