#include <doctest.h>

#include <cmath>

#include "sphmono/errors.hpp"
#include "sphmono/monodromy.hpp"

using namespace sphmono;

namespace {

double mid_seed(const Potential& pot, double h, double j) {
    auto brs = branches(pot, h, j);
    return 0.5 * (brs.at(0).alpha_minus + brs.at(0).alpha_plus);
}

}  // namespace

TEST_SUITE_BEGIN("monodromy");

TEST_CASE("pendulum deltas at the two crossings") {
    auto pend = Potential::from_parameters(1.0);
    auto da = delta_at(pend, 0.5, Side::plus, mid_seed(pend, 0.5, 0.5));
    CHECK(da.value_int == -1);  // one pole touched by the j=0 orbit
    CHECK(da.residual < 1e-2);
    CHECK(da.samples.size() >= 4);
    CHECK(da.samples.front().j == 0.5);

    auto db = delta_at(pend, 1.5, Side::plus, mid_seed(pend, 1.5, 0.5));
    CHECK(db.value_int == -2);  // both poles
    CHECK(db.residual < 1e-2);

    // side antisymmetry
    auto da_minus = delta_at(pend, 0.5, Side::minus, mid_seed(pend, 0.5, 0.5));
    CHECK(da_minus.value_real == doctest::Approx(-da.value_real).epsilon(2e-4));
    for (const auto& s : da_minus.samples) CHECK(s.j < 0.0);
}

TEST_CASE("perturbed pendulum deltas cover all three plateaus") {
    auto pot = Potential::from_parameters(-1.0, -2.0);
    CHECK(delta_at(pot, 0.5, Side::plus, mid_seed(pot, 0.5, 0.5)).value_int == 0);
    CHECK(delta_at(pot, 2.0, Side::plus, mid_seed(pot, 2.0, 0.5)).value_int == -1);
    CHECK(delta_at(pot, 4.0, Side::plus, mid_seed(pot, 4.0, 0.5)).value_int == -2);
}

TEST_CASE("delta_at rejects non-regular crossings") {
    auto pend = Potential::from_parameters(1.0);
    CHECK_THROWS_AS(delta_at(pend, 1.0, Side::plus, 1.5), CriticalValue);
    CHECK_THROWS_AS(delta_at(pend, 0.5, Side::plus, 3.1), BranchLost);  // seed off-branch
    DeltaOptions bad;
    bad.j_floor = 0.3;  // leaves fewer than 4 samples
    CHECK_THROWS_AS(delta_at(pend, 0.5, Side::plus, mid_seed(pend, 0.5, 0.5), bad),
                    NonConvergent);
}

TEST_CASE("circuit check on valid and invalid paths") {
    auto pend = Potential::from_parameters(1.0);
    Circuit good{0.5, 1.5, 0.5, +1};
    CHECK(circuit_check(pend, good).empty());

    Circuit no_singular{0.5, 0.9, 0.3, +1};
    CHECK(circuit_check(pend, no_singular).empty());

    // the laser path crosses the interior critical curve near h = 1/8
    auto laser = Potential::from_parameters(1.0, 2.0);
    Circuit crossing{-1.5, 1.0, 0.05, +1};
    auto violations = circuit_check(laser, crossing);
    CHECK(!violations.empty());

    CHECK_THROWS_AS(circuit_check(pend, Circuit{1.5, 0.5, 0.5, +1}), InvalidInput);
}

TEST_CASE("pendulum monodromy test") {
    auto pend = Potential::from_parameters(1.0);
    auto rep = monodromy_test(pend, Circuit{0.5, 1.5, 0.5, +1});
    CHECK(rep.delta_a.value_int == -1);
    CHECK(rep.delta_b.value_int == -2);
    CHECK(rep.index == -1);
    CHECK(std::abs(rep.index) == 1);
    CHECK(rep.has_monodromy);

    // transfer matrices at the representative points keep the nilpotent form
    for (const auto& m : {rep.transfer_a, rep.transfer_b}) {
        CHECK(m.m11 == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::abs(m.m21) < 1e-8);
        CHECK(m.det() == doctest::Approx(1.0).epsilon(1e-8));
    }

    // minus-side consistency
    REQUIRE(rep.delta_a_minus.has_value());
    CHECK(rep.delta_a_minus->value_real ==
          doctest::Approx(-rep.delta_a.value_real).epsilon(2e-4));
}

TEST_CASE("null circuits yield index zero") {
    auto pend = Potential::from_parameters(1.0);
    MonodromyOptions fast;
    fast.check_minus_side = false;
    auto rep = monodromy_test(pend, Circuit{1.2, 1.8, 0.3, +1}, fast);
    CHECK(rep.index == 0);
    CHECK(!rep.has_monodromy);
    rep = monodromy_test(pend, Circuit{0.5, 0.9, 0.3, +1}, fast);
    CHECK(rep.index == 0);

    auto pot = Potential::from_parameters(-1.0, -2.0);
    rep = monodromy_test(pot, Circuit{1.5, 2.5, 0.4, +1}, fast);
    CHECK(rep.index == 0);
}

TEST_CASE("index is additive along the energy axis") {
    auto pot = Potential::from_parameters(-1.0, -2.0);
    MonodromyOptions fast;
    fast.check_minus_side = false;
    long i_ab = monodromy_test(pot, Circuit{0.5, 2.0, 0.5, +1}, fast).index;
    long i_bc = monodromy_test(pot, Circuit{2.0, 4.0, 0.5, +1}, fast).index;
    long i_ac = monodromy_test(pot, Circuit{0.5, 4.0, 0.5, +1}, fast).index;
    CHECK(std::abs(i_ab) == 1);
    CHECK(std::abs(i_ac) == 2);
    CHECK(i_ab + i_bc == i_ac);
}

TEST_CASE("invalid circuits are refused") {
    auto laser = Potential::from_parameters(1.0, 2.0);
    MonodromyOptions fast;
    fast.check_minus_side = false;
    CHECK_THROWS_AS(monodromy_test(laser, Circuit{-1.5, 1.0, 0.05, +1}, fast), InvalidCircuit);

    auto pend = Potential::from_parameters(1.0);
    CHECK_THROWS_AS(monodromy_test(pend, Circuit{0.5, 1.0, 0.5, +1}, fast), InvalidCircuit);
    CHECK_THROWS_AS(monodromy_test(pend, Circuit{1.5, 0.5, 0.5, +1}, fast), InvalidInput);
}

TEST_CASE("integer quantization across the example potentials") {
    struct Probe {
        double omega, eta, lambda, h;
    };
    const Probe probes[] = {
        {1.0, 0.0, 0.0, 0.5},  {1.0, 0.0, 0.0, 1.5},   {-1.0, -2.0, 0.0, 2.0},
        {1.0, 2.0, 0.0, -1.5}, {1.2, -0.2, -1.1, 0.2}, {1.2, -0.2, -1.1, 0.75},
    };
    for (const auto& p : probes) {
        auto pot = Potential::from_parameters(p.omega, p.eta, p.lambda);
        auto d = delta_at(pot, p.h, Side::plus, mid_seed(pot, p.h, 0.25));
        CHECK(d.residual < 1e-2);
    }
}

TEST_SUITE_END();
