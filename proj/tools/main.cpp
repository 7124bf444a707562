#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "perturb/leading_order.hpp"
#include "perturb/perturbation.hpp"
#include "perturb/pipeline.hpp"
#include "perturb/validation.hpp"

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_short(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

perturb::Rounding parse_rounding(const std::string& s) {
    if (s == "exact") return perturb::Rounding::exact;
    if (s == "paper") return perturb::Rounding::paper;
    throw std::invalid_argument("--rounding must be 'exact' or 'paper'");
}

perturb::SeedMode parse_seed_mode(const std::string& s) {
    if (s == "approx") return perturb::SeedMode::approx;
    if (s == "paper") return perturb::SeedMode::paper;
    throw std::invalid_argument("--seed-mode must be 'approx' or 'paper'");
}

int run_derive(int order) {
    using namespace perturb;
    std::cout << "Eq (9) series (order " << order << "):\n  " << build_rhs_series(order).str()
              << "\n";
    OrderEquations oe = derive_order_equations(order);
    std::cout << "Eq (14) leading part: (" << oe.leading_numerator.str() << ") / "
              << oe.leading_denominator.str() << "\n";
    std::cout << "Eq (14) first part:   (" << oe.first_numerator.str() << ") / "
              << oe.first_denominator.str() << "\n";
    std::cout << "Eq (14) identity: PASS\n";
    PerturbationSplit split = split_perturbation();
    std::cout << "Eq (15) leading balance: y0' = 1 - x^2*y0^-2\n";
    std::cout << "Eq (20) gain:    " << split.gain.str() << "\n";
    std::cout << "Eq (20) forcing: " << split.forcing.str() << "\n";
    std::cout << "Eq (20) split: PASS\n";
    return 0;
}

int run_leading() {
    using namespace perturb;
    CubicRoots roots = solve_leading_cubic();
    FirstIntegral fi = first_integral(roots);
    std::cout << "k (real root)    = " << fmt(roots.k) << "\n";
    std::cout << "complex pair     = " << fmt(roots.pair_re) << " +- " << fmt(roots.pair_im)
              << "i\n";
    std::cout << "cubic residual   = " << fmt_short(roots.k * roots.k * roots.k -
                                                    roots.k * roots.k + 1.0)
              << "\n";
    std::cout << "ray residual     = " << fmt_short(ray_residual(roots.k)) << "\n";
    std::cout << "Eq (16) exponent s1 = " << fmt(fi.s1) << "\n";
    std::cout << "Eq (16) exponent s2 = " << fmt(fi.s2.real()) << " + " << fmt(fi.s2.imag())
              << "i\n";
    double residue_sum = fi.s1 + 2.0 * fi.s2.real();
    std::cout << "residue sum s1 + 2 Re(s2) = " << fmt(residue_sum) << " (target 1)\n";
    return 0;
}

int run_correction(double n) {
    using namespace perturb;
    CubicRoots roots = solve_leading_cubic();
    CorrectionCoefficients cc = correction_coefficients(n, roots.k);
    double r = correction_coefficient_r(n, roots.k);
    std::cout << "Eq (21) A(n)  = " << fmt(cc.a_of(n)) << "  (A_const = " << fmt(cc.a_const)
              << ", A_n = " << fmt(cc.a_n) << ")\n";
    std::cout << "Eq (21) alpha = " << fmt(cc.alpha) << "\n";
    std::cout << "Eq (21) beta  = " << fmt(cc.beta) << "\n";
    std::cout << "Eq (22) r(n)  = " << fmt(r) << "\n";
    std::cout << "paper-rounded r(n) = " << fmt(1.012 - 0.3373 * n) << " (from 1.012 - 0.3373 n)\n";
    return 0;
}

int run_solution(double p, double n, perturb::Rounding rounding) {
    using namespace perturb;
    ApproxSolution sol = compose_solution(p, n, rounding);
    std::cout << "z(v) = c0 + c1*v + c2*v^2 with\n";
    std::cout << "  c0 = " << fmt(sol.p * (1.0 - sol.k + sol.r)) << "   (p(1 - k + r))\n";
    std::cout << "  c1 = " << fmt(sol.k - 2.0 * sol.r) << "   (k - 2r)\n";
    std::cout << "  c2 = " << fmt(sol.r / sol.p) << "   (r/p)\n";
    std::cout << "  k = " << fmt(sol.k) << ", r = " << fmt(sol.r) << " ["
              << (rounding == Rounding::exact ? "exact" : "paper-rounded") << "]\n";
    std::cout << "  z(p) = " << fmt(sol.evaluate(sol.p)) << ", slope at p = "
              << fmt(sol.slope(sol.p)) << "\n";
    ApproxSolution other = compose_solution(
        p, n, rounding == Rounding::exact ? Rounding::paper : Rounding::exact);
    std::cout << "  [" << (rounding == Rounding::exact ? "paper-rounded" : "exact")
              << " form: c0 = " << fmt(other.p * (1.0 - other.k + other.r)) << ", c1 = "
              << fmt(other.k - 2.0 * other.r) << ", c2 = " << fmt(other.r / other.p) << "]\n";
    return 0;
}

int run_validate(double p, int n, const perturb::IntegrationConfig& config,
                 perturb::Rounding rounding, const std::string& csv_path, bool quiet) {
    using namespace perturb;
    ModelParams params{p, n};
    ApproxSolution sol = compose_solution(p, static_cast<double>(n), rounding);
    Trajectory traj = integrate_original(params, config, sol);
    SweepRecord rec = compare(params, config, sol);
    if (!quiet) {
        std::cout << "p = " << fmt_short(p) << ", n = " << n << ", delta = "
                  << fmt_short(config.delta) << ", window = " << fmt_short(config.window) << "\n";
        std::cout << "sup_err = " << fmt(rec.sup_err) << "\n";
        std::cout << "rms_err = " << fmt(rec.rms_err) << "\n";
        std::cout << "samples = " << rec.samples << ", stop_reason = "
                  << to_string(rec.stop_reason) << "\n";
    }
    if (!csv_path.empty()) write_file(csv_path, trajectory_csv(params, config, traj, sol));
    return 0;
}

int run_sweep(const std::vector<double>& ps, const std::vector<int>& ns,
              const perturb::IntegrationConfig& config, perturb::Rounding rounding,
              const std::string& csv_path, const std::string& svg_path, bool quiet) {
    using namespace perturb;
    std::vector<SweepRecord> records = sweep(ps, ns, config, rounding);
    if (!quiet) std::cout << sweep_csv(records);
    if (!csv_path.empty()) write_file(csv_path, sweep_csv(records));
    if (!svg_path.empty()) write_file(svg_path, sweep_svg(records));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local perturbation analysis of the first-price auction ODE"};
    app.require_subcommand(1);

    int order = 3;
    double p = 0.5;
    double n_real = 3.0;
    int n_int = 3;
    std::string rounding_str = "exact";
    std::string seed_mode_str = "approx";
    std::string csv_path, svg_path;
    bool quiet = false;
    perturb::IntegrationConfig config;
    std::vector<double> p_grid = perturb::default_p_grid();
    std::vector<int> n_grid = perturb::default_n_grid();

    CLI::App* derive = app.add_subcommand("derive", "Replay the series derivation with identity checks");
    derive->add_option("--order", order, "Truncation order of the eps expansion")
        ->capture_default_str()
        ->check(CLI::Range(3, 12));

    app.add_subcommand("leading", "Roots of the leading-order cubic and first-integral exponents");

    CLI::App* correction = app.add_subcommand("correction", "First-order correction constants and r(n)");
    correction->add_option("--n", n_real, "Number of bidders (n >= 3)")->capture_default_str();

    CLI::App* solution = app.add_subcommand("solution", "Composed approximate solution coefficients");
    solution->add_option("--p", p, "Reserve boundary value, in (0, 1)")->capture_default_str();
    solution->add_option("--n", n_real, "Number of bidders (n >= 3)")->capture_default_str();
    solution->add_option("--rounding", rounding_str, "Constant set: exact or paper")
        ->capture_default_str()
        ->check(CLI::IsMember({"exact", "paper"}));

    CLI::App* validate_cmd = app.add_subcommand("validate", "Integrate the model ODE and compare one cell");
    validate_cmd->add_option("--p", p, "Reserve boundary value, in (0, 1)")->capture_default_str();
    validate_cmd->add_option("--n", n_int, "Number of bidders (integer >= 3)")->capture_default_str();
    validate_cmd->add_option("--delta", config.delta, "Seed offset from p")->capture_default_str();
    validate_cmd->add_option("--window", config.window, "Integration span in v")->capture_default_str();
    validate_cmd->add_option("--tol", config.local_tol, "Local error tolerance per step")
        ->capture_default_str();
    validate_cmd->add_option("--seed-mode", seed_mode_str, "Seed rule: approx or paper")
        ->capture_default_str()
        ->check(CLI::IsMember({"approx", "paper"}));
    validate_cmd->add_option("--rounding", rounding_str, "Constant set: exact or paper")
        ->capture_default_str()
        ->check(CLI::IsMember({"exact", "paper"}));
    validate_cmd->add_option("--csv", csv_path, "Write the trajectory table to this path");
    validate_cmd->add_flag("--quiet", quiet, "Suppress the stdout summary");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Agreement sweep over the (p, n) grid");
    sweep_cmd->add_option("--p", p_grid, "Grid of p values")->capture_default_str();
    sweep_cmd->add_option("--n", n_grid, "Grid of n values")->capture_default_str();
    sweep_cmd->add_option("--delta", config.delta, "Seed offset from p")->capture_default_str();
    sweep_cmd->add_option("--window", config.window, "Integration span in v")->capture_default_str();
    sweep_cmd->add_option("--tol", config.local_tol, "Local error tolerance per step")
        ->capture_default_str();
    sweep_cmd->add_option("--seed-mode", seed_mode_str, "Seed rule: approx or paper")
        ->capture_default_str()
        ->check(CLI::IsMember({"approx", "paper"}));
    sweep_cmd->add_option("--rounding", rounding_str, "Constant set: exact or paper")
        ->capture_default_str()
        ->check(CLI::IsMember({"exact", "paper"}));
    sweep_cmd->add_option("--csv", csv_path, "Write the sweep table to this path");
    sweep_cmd->add_option("--svg", svg_path, "Write the sweep chart to this path");
    sweep_cmd->add_flag("--quiet", quiet, "Suppress the stdout table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        config.seed_mode = parse_seed_mode(seed_mode_str);
        perturb::Rounding rounding = parse_rounding(rounding_str);
        if (derive->parsed()) return run_derive(order);
        if (app.got_subcommand("leading")) return run_leading();
        if (correction->parsed()) return run_correction(n_real);
        if (solution->parsed()) return run_solution(p, n_real, rounding);
        if (validate_cmd->parsed())
            return run_validate(p, n_int, config, rounding, csv_path, quiet);
        if (sweep_cmd->parsed())
            return run_sweep(p_grid, n_grid, config, rounding, csv_path, svg_path, quiet);
        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const perturb::identity_error& e) {
        std::cerr << "identity check failed: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
