#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "perturb/leading_order.hpp"

using namespace perturb;

namespace {

double leading_rhs(double x, double y) { return (y * y - x * x) / (y * y); }

}  // namespace

TEST_CASE("real cubic root and conjugate pair satisfy the polynomial") {
    CubicRoots roots = solve_leading_cubic();
    double k = roots.k;
    CHECK(std::abs(k * k * k - k * k + 1.0) < 1e-14);
    CHECK(k == doctest::Approx(-0.754878).epsilon(1e-6));
    CHECK(roots.k == doctest::Approx(-0.75487766624669272).epsilon(1e-14));
    CHECK(roots.pair_re == doctest::Approx(0.87743883312334636).epsilon(1e-14));
    CHECK(roots.pair_im == doctest::Approx(0.74486176661974424).epsilon(1e-14));

    std::complex<double> r2(roots.pair_re, roots.pair_im);
    std::complex<double> q = (r2 - 1.0) * r2 * r2 + 1.0;
    CHECK(std::abs(q) < 1e-14);
}

TEST_CASE("roots obey the Vieta relations of F^3 - F^2 + 1") {
    CubicRoots roots = solve_leading_cubic();
    double k = roots.k;
    double mod2 = roots.pair_re * roots.pair_re + roots.pair_im * roots.pair_im;
    CHECK(std::abs(k + 2.0 * roots.pair_re - 1.0) < 1e-12);   // e1 = 1
    CHECK(std::abs(2.0 * k * roots.pair_re + mod2) < 1e-12);  // e2 = 0
    CHECK(std::abs(k * mod2 + 1.0) < 1e-12);                  // e3 = -1
}

TEST_CASE("ray residual vanishes only at the cubic root") {
    CubicRoots roots = solve_leading_cubic();
    CHECK(std::abs(ray_residual(roots.k)) < 1e-15);
    CHECK(ray_residual(1.0) == doctest::Approx(1.0));
    CHECK(ray_residual(-1.0) == doctest::Approx(-1.0));
    CHECK(std::abs(ray_residual(-0.7)) > 1e-3);
    CHECK_THROWS_AS(ray_residual(0.0), std::invalid_argument);
}

TEST_CASE("residue weights sum to the numerator's leading coefficient") {
    FirstIntegral fi = first_integral(solve_leading_cubic());
    CHECK(fi.s1 == doctest::Approx(0.17700882267470847).epsilon(1e-14));
    // F^2 / (F^3 - F^2 + 1) decays like 1/F, so the residues sum to 1.
    double sum = fi.s1 + 2.0 * std::real(fi.s2);
    CHECK(std::abs(sum - 1.0) < 1e-12);
}

TEST_CASE("conserved quantity is zero exactly on the invariant ray") {
    FirstIntegral fi = first_integral(solve_leading_cubic());
    for (double X : {0.25, 0.5, 1.0, 2.0}) {
        // X a power of two keeps F = (k*X)/X == k exact, |F - k|^s1 == 0.
        CHECK(conserved_quantity(X, fi.roots.k * X, fi) == 0.0);
    }
    CHECK_THROWS_AS(conserved_quantity(0.0, 1.0, fi), std::domain_error);
}

TEST_CASE("conserved quantity is positively homogeneous of degree 1") {
    FirstIntegral fi = first_integral(solve_leading_cubic());
    const XY points[] = {{0.3, -0.2}, {1.0, 0.05}, {0.7, -1.3}, {2.0, 3.0}};
    for (const XY& pt : points) {
        double base = conserved_quantity(pt.x, pt.y, fi);
        for (double lam : {0.5, 2.0, 10.0}) {
            double scaled = conserved_quantity(lam * pt.x, lam * pt.y, fi);
            CHECK(scaled == doctest::Approx(lam * base).epsilon(1e-9));
        }
    }
}

TEST_CASE("degenerate span returns the start sample") {
    auto samples = integrate_leading(0.5, -0.25, 0.5, 1e-8);
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].x == 0.5);
    CHECK(samples[0].y == -0.25);
}

TEST_CASE("integration preconditions are rejected") {
    CHECK_THROWS_AS(integrate_leading(0.1, 0.0, 1.0, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(integrate_leading(0.0, 1.0, 1.0, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(integrate_leading(-0.1, 1.0, 1.0, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(integrate_leading(0.1, 1.0, -1.0, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(integrate_leading(0.1, 1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate_leading(0.1, 1.0, 1.0, -1e-8), std::invalid_argument);
}

TEST_CASE("trajectory started on the ray stays on the ray") {
    CubicRoots roots = solve_leading_cubic();
    double X0 = 0.01;
    auto samples = integrate_leading(X0, roots.k * X0, 0.1, 1e-10);
    REQUIRE(samples.size() >= 2);
    CHECK(samples.back().x == 0.1);
    for (const XY& s : samples) CHECK(std::abs(s.y - roots.k * s.x) < 1e-8);
}

TEST_CASE("conserved quantity drifts below tolerance along a trajectory") {
    FirstIntegral fi = first_integral(solve_leading_cubic());
    auto samples = integrate_leading(0.01, -0.02, 0.1, 1e-10);
    REQUIRE(samples.size() >= 2);
    double phi0 = conserved_quantity(samples[0].x, samples[0].y, fi);
    REQUIRE(phi0 != 0.0);
    for (const XY& s : samples) {
        double phi = conserved_quantity(s.x, s.y, fi);
        CHECK(std::abs(phi - phi0) < 1e-6 * std::abs(phi0));
    }
}

TEST_CASE("a trajectory driven into the singular line reports the crossing") {
    // From (1, 0.05) the slope is about -399: Y crosses 0 almost at once.
    CHECK(leading_rhs(1.0, 0.05) == doctest::Approx(1.0 - 400.0));

    // Y approaches 0 with a cube-root tangent. A loose tolerance accepts a
    // step across it and the crossing is located and reported; a tight one
    // burns the step size down first. Both refuse to continue, both name
    // the location.
    CHECK_THROWS_WITH_AS(integrate_leading(1.0, 0.05, 2.0, 1e-3),
                         doctest::Contains("Y reached 0"), std::runtime_error);
    CHECK_THROWS_WITH_AS(integrate_leading(1.0, 0.05, 2.0, 1e-8),
                         doctest::Contains("step size underflow"), std::runtime_error);
    try {
        integrate_leading(1.0, 0.05, 2.0, 1e-3);
        FAIL("expected a throw");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("near X = 1.0000") != std::string::npos);
    }
}
