#include "sphmono/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "radial_ke.hpp"
#include "sphmono/actions.hpp"
#include "sphmono/errors.hpp"
#include "sphmono/numerics.hpp"

namespace sphmono {

namespace {

constexpr double kCriticalTol = 1e-9;   // refuse h this close to a critical value
constexpr double kEndpointTol = 1e-10;  // required |V_j(alpha) - h| at turning points

// Newton polish of a turning point after bisection; keeps the residual of
// V_j - h at machine level even when the root sits near a pole. The final
// ulp nudge leaves the endpoint on the allowed side (V_j <= h), so the
// integrands see a nonnegative radial kinetic energy.
double polish_turning_point(const Potential& pot, double h, double j, double theta, double lo,
                            double hi, double interior) {
    for (int it = 0; it < 8; ++it) {
        double g = pot.modified(theta, j) - h;
        double gp = pot.modified_prime(theta, j);
        if (gp == 0.0) break;
        double next = theta - g / gp;
        if (!(next > lo && next < hi)) break;
        if (next == theta) break;
        theta = next;
    }
    for (int it = 0; it < 64 && pot.modified(theta, j) > h; ++it)
        theta = std::nextafter(theta, interior);
    return theta;
}

// Wall enclosing all turning points on the pole side for j != 0: V_j is
// monotone between the pole and the nearest critical angle, so march
// geometrically toward the pole until V_j > h. start_dist must keep the
// march inside that monotone region.
double pole_wall(const Potential& pot, double h, double j, bool left, double start_dist) {
    double d = start_dist;
    for (int it = 0; it < 2000; ++it) {
        double theta = left ? d : M_PI - d;
        if (pot.modified(theta, j) > h) return theta;
        d *= 0.5;
        if (d < 1e-300) break;
    }
    throw NumericalFailure("branches: V_j does not dominate h near the pole");
}

struct Rk45Step {
    std::array<double, 3> y;
    double error;
};

// Dormand-Prince 5(4) pair for y = (theta, p_theta, phi).
template <typename Rhs>
Rk45Step dp5_step(const Rhs& rhs, const std::array<double, 3>& y, double dt) {
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                     e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                     e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    auto axpy = [&](const std::array<double, 3>& base, std::initializer_list<std::pair<double, const std::array<double, 3>*>> terms) {
        std::array<double, 3> r = base;
        for (auto& [c, k] : terms)
            for (int i = 0; i < 3; ++i) r[i] += dt * c * (*k)[i];
        return r;
    };

    auto k1 = rhs(y);
    auto k2 = rhs(axpy(y, {{a21, &k1}}));
    auto k3 = rhs(axpy(y, {{a31, &k1}, {a32, &k2}}));
    auto k4 = rhs(axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    auto k5 = rhs(axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    auto k6 = rhs(axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    std::array<double, 3> y5 = axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    auto k7 = rhs(y5);

    Rk45Step out;
    out.y = y5;
    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
        double e = dt * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                         e7 * k7[i]);
        double scale = 1e-12 + std::max(std::abs(y[i]), std::abs(y5[i]));
        err += (e / scale) * (e / scale);
    }
    out.error = std::sqrt(err / 3.0);
    return out;
}

}  // namespace

std::vector<OrbitBranch> branches(const Potential& pot, double h, double j) {
    if (std::abs(j) < kMomentumSnap) j = 0.0;
    auto crit = critical_points(pot, j);
    double h_min = std::numeric_limits<double>::infinity();
    for (const auto& cp : crit) {
        if (std::abs(h - cp.h_crit) < kCriticalTol)
            throw CriticalValue("branches: h within tolerance of a critical value of V_j");
        h_min = std::min(h_min, cp.h_crit);
    }
    if (h < h_min) throw NoOrbit("branches: h below the minimum of V_j");

    // Segment walls: V_j is monotone between consecutive critical angles, so
    // each segment holds at most one turning point.
    std::vector<double> walls;
    if (j != 0.0) {
        // V_j has at least one critical point for j != 0 (it diverges at both poles)
        if (crit.empty()) throw NumericalFailure("branches: no critical point of V_j found");
        double theta_lo = crit.back().theta;   // smallest theta (largest x)
        double theta_hi = crit.front().theta;  // largest theta
        walls.push_back(pole_wall(pot, h, j, true, 0.5 * std::min(0.6, theta_lo)));
        for (auto it = crit.rbegin(); it != crit.rend(); ++it)  // x descending = theta ascending
            walls.push_back(it->theta);
        walls.push_back(pole_wall(pot, h, j, false, 0.5 * std::min(0.6, M_PI - theta_hi)));
    } else {
        walls.push_back(0.0);
        for (auto it = crit.rbegin(); it != crit.rend(); ++it)
            if (it->x > -1.0 && it->x < 1.0) walls.push_back(it->theta);
        walls.push_back(M_PI);
    }
    walls.erase(std::unique(walls.begin(), walls.end()), walls.end());

    auto g = [&](double theta) { return pot.modified(theta, j) - h; };

    std::vector<double> turning;
    for (std::size_t i = 0; i + 1 < walls.size(); ++i) {
        auto roots = find_roots(g, walls[i], walls[i + 1], 33, 1e-13);
        for (double r : roots) {
            // slope sign tells which side of the root the orbit lives on
            double interior = pot.modified_prime(r, j) > 0.0 ? walls[i] : walls[i + 1];
            r = polish_turning_point(pot, h, j, r, walls[i], walls[i + 1], interior);
            turning.push_back(r);
        }
    }
    std::sort(turning.begin(), turning.end());

    // Assemble the intervals where V_j < h.
    std::vector<OrbitBranch> out;
    std::vector<double> bounds;
    std::vector<bool> is_pole;
    if (j == 0.0 && g(0.0) < 0.0) {
        bounds.push_back(0.0);
        is_pole.push_back(true);
    }
    for (double t : turning) {
        bounds.push_back(t);
        is_pole.push_back(false);
    }
    if (j == 0.0 && g(M_PI) < 0.0) {
        bounds.push_back(M_PI);
        is_pole.push_back(true);
    }
    if (bounds.size() % 2 != 0)
        throw NumericalFailure("branches: unpaired turning points (h too close to critical?)");

    for (std::size_t i = 0; i + 1 < bounds.size(); i += 2) {
        double mid = 0.5 * (bounds[i] + bounds[i + 1]);
        if (g(mid) >= 0.0) throw NumericalFailure("branches: inconsistent interval signs");
        OrbitBranch br;
        br.alpha_minus = bounds[i];
        br.alpha_plus = bounds[i + 1];
        br.open_left = is_pole[i];
        br.open_right = is_pole[i + 1];
        br.branch_index = int(out.size());
        for (int side = 0; side < 2; ++side) {
            double alpha = side == 0 ? br.alpha_minus : br.alpha_plus;
            bool pole = side == 0 ? br.open_left : br.open_right;
            if (!pole && std::abs(pot.modified(alpha, j) - h) > kEndpointTol)
                throw NumericalFailure("branches: turning-point residual above 1e-10");
        }
        out.push_back(br);
    }
    if (out.empty()) throw NoOrbit("branches: no interval with V_j < h");
    return out;
}

double period(const Potential& pot, double h, double j, const OrbitBranch& branch, double tol) {
    RadialKE ke(pot, h, j, branch);
    EndpointAwareFn g = [&](double theta, double dist, int end) {
        return 1.0 / std::sqrt(ke(theta, dist, end));
    };
    SingularIntegral spec;
    spec.lower = branch.alpha_minus;
    spec.upper = branch.alpha_plus;
    spec.singular_at_lower = !branch.open_left;
    spec.singular_at_upper = !branch.open_right;
    spec.tol = tol;
    return std::sqrt(2.0) * integrate_singular(g, spec);
}

double period_hat(const Potential& pot, double h, double j, const OrbitBranch& branch,
                  double tol) {
    if (j == 0.0) throw PoleSingularity("period_hat: requires j != 0");
    double T = period(pot, h, j, branch, tol);
    double delta_phi = -2.0 * M_PI * chi(pot, h, j, branch, tol);
    return 2.0 * M_PI * T / std::abs(delta_phi);
}

TrajectoryRecord trajectory_oracle(const Potential& pot, double h, double j,
                                   const OrbitBranch& branch, double tol) {
    if (j == 0.0)
        throw PoleSingularity("trajectory_oracle: j = 0 orbits touch the coordinate poles");

    // start at the bottom of the branch, moving outward
    auto crit = critical_points(pot, j);
    double theta0 = std::numeric_limits<double>::quiet_NaN();
    double v_best = std::numeric_limits<double>::infinity();
    for (const auto& cp : crit) {
        if (cp.theta > branch.alpha_minus && cp.theta < branch.alpha_plus &&
            cp.kind != CriticalKind::maximum && cp.h_crit < v_best) {
            v_best = cp.h_crit;
            theta0 = cp.theta;
        }
    }
    if (!std::isfinite(theta0))
        throw NumericalFailure("trajectory_oracle: no interior minimum of V_j in the branch");
    double p0 = std::sqrt(2.0 * (h - pot.modified(theta0, j)));

    auto rhs = [&](const std::array<double, 3>& y) {
        double s = std::sin(y[0]);
        double s3 = s * s * s;
        return std::array<double, 3>{y[1], j * j * std::cos(y[0]) / s3 - pot.v_prime(y[0]),
                                     j / (s * s)};
    };

    TrajectoryRecord rec;
    std::array<double, 3> y{theta0, p0, 0.0};
    double t = 0.0;
    double dt = 1e-4;
    const double t_cap = 1e4;
    const double sixth_root = 1.0 / 5.0;

    auto record_sample = [&](double time, const std::array<double, 3>& state) {
        rec.times.push_back(time);
        rec.states.push_back({state[0], state[1], state[2], j});
        double energy = 0.5 * state[1] * state[1] + pot.modified(state[0], j);
        rec.max_energy_drift = std::max(rec.max_energy_drift, std::abs(energy - h));
    };
    record_sample(t, y);

    // advance one adaptive step; returns the accepted step size
    auto advance = [&](std::array<double, 3>& state, double& time, double& step,
                       double step_limit) {
        for (int attempt = 0; attempt < 200; ++attempt) {
            double trial = std::min(step, step_limit);
            auto res = dp5_step(rhs, state, trial);
            double err = res.error / tol;
            if (err <= 1.0) {
                time += trial;
                state = res.y;
                double grow = err > 0.0 ? 0.9 * std::pow(err, -sixth_root) : 5.0;
                step = trial * std::clamp(grow, 0.2, 5.0);
                return trial;
            }
            step = trial * std::clamp(0.9 * std::pow(err, -sixth_root), 0.2, 1.0);
            if (step < 1e-14 * std::max(1.0, std::abs(time)))
                throw IntegrationFailure("trajectory_oracle: step size underflow");
        }
        throw IntegrationFailure("trajectory_oracle: step control failed to accept");
    };

    // Resolve a section crossing inside [t_lo, t_lo + span] starting from y_lo:
    // Newton iteration on p_theta(t), re-integrating from the stored state.
    auto refine_crossing = [&](const std::array<double, 3>& y_lo, double t_lo, double span) {
        double target = t_lo + 0.5 * span;
        std::array<double, 3> y_cross = y_lo;
        for (int it = 0; it < 60; ++it) {
            y_cross = y_lo;
            double tt = t_lo;
            double step = std::max((target - t_lo) * 0.25, 1e-13);
            while (tt < target) {
                double limit = target - tt;
                if (limit <= 0.0) break;
                advance(y_cross, tt, step, limit);
            }
            double pdot = rhs(y_cross)[1];
            if (pdot == 0.0) break;
            double delta = -y_cross[1] / pdot;
            double next = std::clamp(target + delta, t_lo, t_lo + span);
            if (std::abs(next - target) < 1e-14 * std::max(1.0, std::abs(target))) {
                target = next;
                break;
            }
            target = next;
        }
        return std::pair<double, std::array<double, 3>>(target, y_cross);
    };

    // initial motion has p > 0, so the first crossing direction is + -> -
    int crossings_found = 0;
    double t_first = 0.0, t_second = 0.0;
    std::array<double, 3> y_first{}, y_second{};
    while (t < t_cap) {
        double t_prev = t;
        auto y_prev = y;
        advance(y, t, dt, t_cap - t_prev);
        record_sample(t, y);
        if (y_prev[1] > 0.0 && y[1] <= 0.0) {  // falling crossing of p_theta = 0
            auto [tc, yc] = refine_crossing(y_prev, t_prev, t - t_prev);
            if (crossings_found == 0) {
                t_first = tc;
                y_first = yc;
                crossings_found = 1;
            } else {
                t_second = tc;
                y_second = yc;
                crossings_found = 2;
                break;
            }
        }
    }
    if (crossings_found < 2)
        throw SectionNotFound("trajectory_oracle: time cap reached before two same-direction crossings");

    rec.radial_period = t_second - t_first;
    rec.delta_phi = y_second[2] - y_first[2];
    double e1 = 0.5 * y_first[1] * y_first[1] + pot.modified(y_first[0], j);
    double e2 = 0.5 * y_second[1] * y_second[1] + pot.modified(y_second[0], j);
    rec.max_energy_drift = std::max({rec.max_energy_drift, std::abs(e1 - h), std::abs(e2 - h)});
    return rec;
}

}  // namespace sphmono
