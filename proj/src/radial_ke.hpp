// Internal helper: evaluates the radial kinetic energy h - V_j(theta) on a
// branch without cancellation near the turning points. Plain evaluation of
// h - V_j loses all significant digits once |theta - alpha|^2 drops below
// the roundoff of the centrifugal term (the turning point of a small-j orbit
// sits near a pole where j^2/(2 sin^2) is O(1)). Worse, a turning point
// stored as a double sits up to half an ulp away from the true root, and for
// the chi integrand the missing sliver costs sqrt(2r)/(|V_j'| sin^2 alpha),
// which near a pole is far above tolerance.
//
// Both problems disappear in offset coordinates s = theta - alpha:
//
//   h - V_j(alpha+s) = [V(alpha) - V(alpha+s)]
//                    + (j^2/2) (sin^2(alpha+s) - sin^2 alpha)
//                      / (sin^2 alpha sin^2(alpha+s))
//                    + (h - V_j(alpha)),
//
// with every factor expanded through exact identities
//   cos a - cos(a+s)     = 2 sin(a + s/2) sin(s/2)
//   sin^2(a+s) - sin^2 a = 2 cos(a + s/2) sin(s/2) (sin(a+s) + sin a)
//   cos^k a - cos^k th   = (cos a - cos th) sum_i cos^i a cos^{k-1-i} th
// and all trig at a+s computed by addition formulas, so sub-ulp offsets are
// exact. The residual root offset s* (|s*| ~ 1e-16, not representable as a
// theta increment) is found by Newton in s; the substitution variable t^2
// handed over by integrate_singular then measures distance from the true
// root, s = s* -+ t^2.

#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "sphmono/dynamics.hpp"
#include "sphmono/potential.hpp"

namespace sphmono {

class RadialKE {
public:
    RadialKE(const Potential& pot, double h, double j, const OrbitBranch& branch)
        : pot_(pot), h_(h), j_(j) {
        init_end(0, branch.alpha_minus, +1.0);
        init_end(1, branch.alpha_plus, -1.0);
    }

    /// h - V_j at theta; dist/end as handed through by integrate_singular.
    double operator()(double theta, double dist, int end) const {
        if (end == 0) {
            double d = h_ - pot_.modified(theta, j_);
            return d > 0.0 ? d : std::numeric_limits<double>::min();
        }
        int e = end < 0 ? 0 : 1;
        double d = offset_ke(e, s_star_[e] + interior_[e] * dist);
        return d > 0.0 ? d : std::numeric_limits<double>::min();
    }

private:
    // h - V_j(alpha_e + s) through the anchored identities
    double offset_ke(int e, double s) const {
        double half = 0.5 * s;
        double sin_half = std::sin(half), cos_half = std::cos(half);
        double sin_hs = sin_a_[e] * cos_half + cos_a_[e] * sin_half;  // sin(a + s/2)
        double cos_hs = cos_a_[e] * cos_half - sin_a_[e] * sin_half;  // cos(a + s/2)
        double sin_th = sin_a_[e] * std::cos(s) + cos_a_[e] * std::sin(s);
        double cos_th = cos_a_[e] * std::cos(s) - sin_a_[e] * std::sin(s);

        double cos_diff = 2.0 * sin_hs * sin_half;  // cos a - cos th

        // V(alpha) - V(theta) = (cos a - cos th) * sum_k c_k S_{k-1},
        // S_m = sum_{i=0..m} cos^i a cos^{m-i} th
        const auto& c = pot_.coeffs();
        double vdiff = 0.0;
        double s_m = 1.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            vdiff += c[k] * s_m;
            s_m = pow_a_[e][k + 1] + cos_th * s_m;
        }
        vdiff *= cos_diff;

        double d = vdiff + resid_[e];
        if (j_ != 0.0) {
            double sin2_diff = 2.0 * cos_hs * sin_half * (sin_th + sin_a_[e]);
            d += 0.5 * j_ * j_ * sin2_diff / (sin2_a_[e] * sin_th * sin_th);
        }
        return d;
    }

    void init_end(int e, double alpha, double interior) {
        alpha_[e] = alpha;
        interior_[e] = interior;
        sin_a_[e] = std::sin(alpha);
        cos_a_[e] = std::cos(alpha);
        sin2_a_[e] = sin_a_[e] * sin_a_[e];
        resid_[e] = h_ - pot_.modified(alpha, j_);
        pow_a_[e].resize(pot_.coeffs().size() + 2);
        pow_a_[e][0] = 1.0;
        for (std::size_t k = 1; k < pow_a_[e].size(); ++k)
            pow_a_[e][k] = pow_a_[e][k - 1] * cos_a_[e];

        // Newton in offset space for the sub-ulp root correction s*.
        double s = 0.0;
        for (int it = 0; it < 8; ++it) {
            double f = offset_ke(e, s);
            double fp = -pot_.modified_prime(alpha + s, j_);
            if (fp == 0.0 || !std::isfinite(fp)) break;
            double step = -f / fp;
            s += step;
            if (std::abs(step) < 1e-6 * std::abs(s) + 1e-300) break;
        }
        s_star_[e] = std::isfinite(s) ? s : 0.0;
    }

    const Potential& pot_;
    double h_, j_;
    double alpha_[2]{}, interior_[2]{}, sin_a_[2]{}, cos_a_[2]{}, sin2_a_[2]{}, resid_[2]{},
        s_star_[2]{};
    std::vector<double> pow_a_[2];
};

}  // namespace sphmono
