#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sphmono/errors.hpp"
#include "sphmono/numerics.hpp"

using namespace sphmono;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("find_roots on simple functions") {
    auto cosf = [](double x) { return std::cos(x); };
    auto roots = find_roots(cosf, 0.0, M_PI, 64, 1e-12);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(M_PI / 2).epsilon(1e-11));

    auto quad = [](double x) { return (x - 0.25) * (x - 0.75); };
    roots = find_roots(quad, 0.0, 1.0, 64, 1e-12);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(0.25).epsilon(1e-11));
    CHECK(roots[1] == doctest::Approx(0.75).epsilon(1e-11));

    // V_j(theta) - h for the pendulum V = cos(theta), j=0, h=0
    auto vdiff = [](double th) { return std::cos(th); };
    roots = find_roots(vdiff, 0.0, M_PI, 128, 1e-13);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(M_PI / 2).epsilon(1e-12));

    CHECK(find_roots([](double) { return 1.0; }, 0.0, 1.0, 16, 1e-12).empty());
}

TEST_CASE("find_roots is deterministic and validates input") {
    auto f = [](double x) { return std::sin(5.0 * x) - 0.3; };
    auto a = find_roots(f, 0.0, 6.0, 512, 1e-13);
    auto b = find_roots(f, 0.0, 6.0, 512, 1e-13);
    CHECK(a == b);

    CHECK_THROWS_AS(find_roots(f, 0.0, 1.0, 1, 1e-12), InvalidInput);
    CHECK_THROWS_AS(find_roots([](double x) { return std::sin(300.0 * x); }, 0.0, 6.0, 4096, 1e-12),
                    TooManySignChanges);
}

TEST_CASE("singular quadrature kernels") {
    SingularIntegral spec;
    spec.lower = 0.0;
    spec.upper = 1.0;
    spec.singular_at_lower = true;
    spec.singular_at_upper = true;
    spec.tol = 1e-12;
    double v = integrate_singular([](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); }, spec);
    CHECK(std::abs(v - M_PI) / M_PI < 1e-10);

    spec.lower = -1.0;
    spec.upper = 1.0;
    v = integrate_singular([](double x) { return 1.0 / std::sqrt(1.0 - x * x); }, spec);
    CHECK(std::abs(v - M_PI) / M_PI < 1e-10);

    // one-sided singularity
    spec.lower = 0.0;
    spec.upper = 1.0;
    spec.singular_at_upper = false;
    v = integrate_singular([](double x) { return 1.0 / std::sqrt(x); }, spec);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("unflagged singularity is detected via the error estimate") {
    SingularIntegral spec;
    spec.lower = 0.0;
    spec.upper = 1.0;
    spec.singular_at_lower = false;  // wrong on purpose
    spec.singular_at_upper = false;
    spec.tol = 1e-12;
    CHECK_THROWS_AS(integrate_singular([](double x) { return 1.0 / std::sqrt(x); }, spec),
                    ToleranceNotMet);
}

TEST_CASE("integrate_singular is linear and respects symmetry") {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> coef(0.2, 2.0);
    SingularIntegral spec;
    spec.lower = 0.0;
    spec.upper = 1.0;
    spec.singular_at_lower = true;
    spec.singular_at_upper = true;
    spec.tol = 1e-11;

    auto g1 = [](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); };
    auto g2 = [](double x) { return (1.0 + x) / std::sqrt(x * (1.0 - x)); };
    double i1 = integrate_singular(g1, spec);
    double i2 = integrate_singular(g2, spec);
    for (int trial = 0; trial < 5; ++trial) {
        double a = coef(rng), b = coef(rng);
        double combined =
            integrate_singular([&](double x) { return a * g1(x) + b * g2(x); }, spec);
        CHECK(combined == doctest::Approx(a * i1 + b * i2).epsilon(2e-11));
    }

    // symmetric integrand over a symmetric interval = twice the half integral
    SingularIntegral full;
    full.lower = -1.0;
    full.upper = 1.0;
    full.singular_at_lower = true;
    full.singular_at_upper = true;
    full.tol = 1e-11;
    SingularIntegral half;
    half.lower = 0.0;
    half.upper = 1.0;
    half.singular_at_lower = false;
    half.singular_at_upper = true;
    half.tol = 1e-11;
    auto g = [](double x) { return 1.0 / std::sqrt(1.0 - x * x); };
    CHECK(integrate_singular(g, full) ==
          doctest::Approx(2.0 * integrate_singular(g, half)).epsilon(1e-10));
}

TEST_CASE("adaptive_quad on smooth integrands") {
    double v = adaptive_quad([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-13, 40);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-13));
    v = adaptive_quad([](double x) { return std::exp(-x * x); }, -6.0, 6.0, 1e-12, 40);
    CHECK(v == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("extrapolate_limit on a forced geometric sequence") {
    std::vector<std::pair<double, double>> samples;
    for (int k = 1; k <= 12; ++k) {
        double j = std::pow(2.0, -k);
        samples.emplace_back(j, -1.0 + j);
    }
    auto est = extrapolate_limit(samples);
    CHECK(est.converged);
    CHECK(est.value == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(est.samples_used == 12);
    CHECK(est.uncertainty < 1e-2);
}

TEST_CASE("extrapolate_limit rejects bad input and flags non-convergence") {
    std::vector<std::pair<double, double>> few = {{0.5, 1.0}, {0.25, 1.0}, {0.125, 1.0}};
    CHECK_THROWS_AS(extrapolate_limit(few), InvalidInput);

    std::vector<std::pair<double, double>> increasing = {
        {0.1, 1.0}, {0.2, 1.0}, {0.3, 1.0}, {0.4, 1.0}};
    CHECK_THROWS_AS(extrapolate_limit(increasing), InvalidInput);

    // oscillating values never satisfy the closeness criterion
    std::vector<std::pair<double, double>> wobble;
    for (int k = 1; k <= 10; ++k)
        wobble.emplace_back(std::pow(2.0, -k), (k % 2 == 0) ? 1.0 : -1.0);
    auto est = extrapolate_limit(wobble);
    CHECK(!est.converged);

    // converges numerically but far from an integer in integer mode
    std::vector<std::pair<double, double>> off_integer;
    for (int k = 1; k <= 14; ++k)
        off_integer.emplace_back(std::pow(2.0, -k), -0.5 + std::pow(2.0, -k));
    est = extrapolate_limit(off_integer);
    CHECK(!est.converged);
    ExtrapolationOptions band;
    band.integer_mode = false;
    est = extrapolate_limit(off_integer, band);
    CHECK(est.converged);
    CHECK(est.value == doctest::Approx(-0.5).epsilon(1e-8));
}

TEST_SUITE_END();
