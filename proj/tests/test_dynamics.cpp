#include <doctest.h>

#include <cmath>
#include <random>

#include "sphmono/actions.hpp"
#include "sphmono/dynamics.hpp"
#include "sphmono/errors.hpp"
#include "sphmono/potential.hpp"

using namespace sphmono;

namespace {

Potential pendulum_up() { return Potential({1.0}); }  // V = cos(theta)

// dense-sampling oracle for the branch count: sign pattern of V_j - h
int branch_count_oracle(const Potential& pot, double h, double j, int n = 10000) {
    int count = 0;
    bool inside = false;
    for (int i = 1; i < n; ++i) {
        double theta = M_PI * double(i) / double(n);
        bool below = pot.modified(theta, j) < h;
        if (below && !inside) ++count;
        inside = below;
    }
    return count;
}

}  // namespace

TEST_SUITE_BEGIN("dynamics");

TEST_CASE("branches of the pendulum at j=0") {
    auto pend = pendulum_up();
    auto brs = branches(pend, 0.0, 0.0);
    REQUIRE(brs.size() == 1);
    CHECK(brs[0].alpha_minus == doctest::Approx(M_PI / 2).epsilon(1e-12));
    CHECK(brs[0].alpha_plus == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(!brs[0].open_left);
    CHECK(brs[0].open_right);

    brs = branches(pend, 1.5, 0.0);
    REQUIRE(brs.size() == 1);
    CHECK(brs[0].alpha_minus == 0.0);
    CHECK(brs[0].alpha_plus == doctest::Approx(M_PI));
    CHECK(brs[0].open_left);
    CHECK(brs[0].open_right);
}

TEST_CASE("two-color potential has two branches between the barrier energies") {
    auto tc = Potential::from_parameters(1.2, -0.2, -1.1);
    auto brs = branches(tc, 0.4, 0.0);
    CHECK(brs.size() == 2);
    CHECK(brs[0].alpha_plus < brs[1].alpha_minus);
    CHECK(brs[0].branch_index == 0);
    CHECK(brs[1].branch_index == 1);
}

TEST_CASE("branches error conditions") {
    auto pend = Potential::from_parameters(1.0);  // V = -cos
    CHECK_THROWS_AS(branches(pend, 1.0, 0.0), CriticalValue);
    CHECK_THROWS_AS(branches(pend, 1.0 + 5e-10, 0.0), CriticalValue);
    CHECK_THROWS_AS(branches(pend, -2.0, 0.0), NoOrbit);
    CHECK_THROWS_AS(branches(pend, -2.0, 0.3), NoOrbit);
}

TEST_CASE("turning points satisfy V_j = h to 1e-10") {
    std::mt19937 rng(555111);
    std::uniform_real_distribution<double> hdist(-0.8, 2.5), jdist(0.01, 1.2);
    int checked = 0;
    while (checked < 60) {
        auto pot = Potential::from_parameters(1.2, -0.2, -1.1);
        double h = hdist(rng), j = jdist(rng);
        std::vector<OrbitBranch> brs;
        try {
            brs = branches(pot, h, j);
        } catch (const InvalidInput&) {
            continue;
        }
        for (const auto& br : brs) {
            CHECK(std::abs(pot.modified(br.alpha_minus, j) - h) < 1e-10);
            CHECK(std::abs(pot.modified(br.alpha_plus, j) - h) < 1e-10);
            CHECK(pot.modified(0.5 * (br.alpha_minus + br.alpha_plus), j) < h);
        }
        ++checked;
    }
}

TEST_CASE("branch count matches a dense-sampling oracle") {
    std::mt19937 rng(20240229);
    std::uniform_real_distribution<double> coef(-1.5, 1.5), hdist(-2.0, 2.0), jdist(0.05, 1.0);
    int checked = 0;
    while (checked < 100) {
        std::vector<double> c = {coef(rng), coef(rng), coef(rng)};
        if (c[0] == 0.0) c[0] = 1.0;
        Potential pot(c);
        double h = hdist(rng), j = jdist(rng);
        std::vector<OrbitBranch> brs;
        try {
            brs = branches(pot, h, j);
        } catch (const InvalidInput&) {
            continue;
        }
        CHECK(int(brs.size()) == branch_count_oracle(pot, h, j));
        ++checked;
    }
}

TEST_CASE("period approaches the harmonic limit near the minimum") {
    // Interior minimum: perturbed pendulum, V'' = 3.75 at x = -1/4, full
    // libration with T -> 2 pi / sqrt(3.75).
    auto pot = Potential::from_parameters(-1.0, -2.0);
    double h = -0.125 + 1e-6;
    auto brs = branches(pot, h, 0.0);
    REQUIRE(brs.size() == 1);
    CHECK(!brs[0].open_left);
    CHECK(!brs[0].open_right);
    double T = period(pot, h, 0.0, brs[0]);
    CHECK(T == doctest::Approx(2.0 * M_PI / std::sqrt(3.75)).epsilon(1e-4));

    // Pole minimum: V = cos(theta) near theta = pi, V'' = 1. The reflecting
    // orbit closes after half the harmonic libration, so T -> pi.
    auto pend = pendulum_up();
    double hp = -1.0 + 1e-6;
    auto pole_branch = branches(pend, hp, 0.0);
    REQUIRE(pole_branch.size() == 1);
    CHECK(pole_branch[0].open_right);
    double Tp = period(pend, hp, 0.0, pole_branch[0]);
    CHECK(Tp == doctest::Approx(M_PI).epsilon(1e-4));
}

TEST_CASE("period is even in j and matches the trajectory oracle") {
    auto pend = pendulum_up();
    double h = 0.5, j = 0.5;
    auto br = branches(pend, h, j).at(0);
    auto br_m = branches(pend, h, -j).at(0);
    CHECK(period(pend, h, j, br) == doctest::Approx(period(pend, h, -j, br_m)).epsilon(1e-13));

    auto rec = trajectory_oracle(pend, h, j, br, 1e-11);
    CHECK(period(pend, h, j, br) == doctest::Approx(rec.radial_period).epsilon(1e-6));
}

TEST_CASE("trajectory oracle conserves the invariants") {
    auto pend = pendulum_up();
    double h = 0.5, j = 0.25, tol = 1e-10;
    auto br = branches(pend, h, j).at(0);
    auto rec = trajectory_oracle(pend, h, j, br, tol);
    CHECK(rec.max_energy_drift < 100.0 * tol);
    CHECK(rec.delta_phi > 0.0);  // phi-dot = j/sin^2 > 0 for j > 0
    for (const auto& s : rec.states) CHECK(s.p_phi == j);
    CHECK(rec.radial_period > 0.0);

    CHECK_THROWS_AS(trajectory_oracle(pend, 0.0, 0.0, branches(pend, 0.0, 0.0).at(0), tol),
                    PoleSingularity);
}

TEST_CASE("azimuthal period against the oracle and its divergence") {
    auto pend = pendulum_up();
    double h = 0.5, j = 0.25;
    auto br = branches(pend, h, j).at(0);
    auto br_m = branches(pend, h, -j).at(0);
    CHECK(period_hat(pend, h, j, br) ==
          doctest::Approx(period_hat(pend, h, -j, br_m)).epsilon(1e-12));

    // against the oracle: T_hat = 2 pi T_num / delta_phi
    auto rec = trajectory_oracle(pend, h, j, br, 1e-11);
    double that_oracle = 2.0 * M_PI * rec.radial_period / rec.delta_phi;
    CHECK(period_hat(pend, h, j, br) == doctest::Approx(that_oracle).epsilon(1e-6));

    // T_hat grows without bound as j -> 0+
    double t1 = period_hat(pend, h, 0.1, branches(pend, h, 0.1).at(0));
    double t2 = period_hat(pend, h, 0.05, branches(pend, h, 0.05).at(0));
    double t3 = period_hat(pend, h, 0.025, branches(pend, h, 0.025).at(0));
    CHECK(t1 < t2);
    CHECK(t2 < t3);

    CHECK_THROWS_AS(period_hat(pend, 0.0, 0.0, branches(pend, 0.0, 0.0).at(0)), PoleSingularity);
}

TEST_SUITE_END();
