#pragma once

#include <vector>

#include "sphmono/potential.hpp"

namespace sphmono {

/** One closed orbit gamma_k of the reduced radial motion at fixed (h,j):
 *  the interval [alpha_minus, alpha_plus] where V_j <= h. An endpoint open at
 *  a pole (alpha_minus = 0 or alpha_plus = pi, possible only for j = 0) marks
 *  an orbit that passes through that pole under the (theta,p) -> (theta,-p)
 *  identification instead of turning.
 */
struct OrbitBranch {
    double alpha_minus = 0.0;
    double alpha_plus = 0.0;
    bool open_left = false;
    bool open_right = false;
    int branch_index = 0;
};

/// Symplectic coordinates of the full system.
struct PhaseState {
    double theta = 0.0;
    double p_theta = 0.0;
    double phi = 0.0;
    double p_phi = 0.0;
};

/// Output of the trajectory oracle over one radial period.
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<PhaseState> states;
    double radial_period = 0.0;    ///< section-to-section return time T_num
    double delta_phi = 0.0;        ///< azimuthal advance over one radial period
    double max_energy_drift = 0.0; ///< max |H - h| along the samples
};

/** The r disjoint branches at a regular (h,j), ordered by alpha_minus.
 *  Throws CriticalValue if h lies within 1e-9 of a critical value of V_j
 *  (merging turning points are not resolved) and NoOrbit if h < min V_j.
 */
std::vector<OrbitBranch> branches(const Potential& pot, double h, double j);

/// Radial period T = sqrt(2) * integral of dtheta/sqrt(h - V_j) over the branch.
double period(const Potential& pot, double h, double j, const OrbitBranch& branch,
              double tol = 1e-10);

/** Azimuthal period T_hat = 2 pi T / |delta phi| with delta phi = -2 pi chi
 *  taken from quadrature; diverges as j -> 0. Requires j != 0.
 */
double period_hat(const Potential& pot, double h, double j, const OrbitBranch& branch,
                  double tol = 1e-10);

/** Independent check of the quadrature path: integrates the equations of
 *  motion with an embedded adaptive Runge-Kutta stepper from the bottom of
 *  the branch and measures the radial period as the first return to the
 *  section p_theta = 0 with the initial crossing direction (two half-period
 *  crossings), plus the azimuthal advance over it. p_phi is not integrated;
 *  phi-dot uses the constant j. Requires j != 0 (the orbit stays off the
 *  poles).
 */
TrajectoryRecord trajectory_oracle(const Potential& pot, double h, double j,
                                   const OrbitBranch& branch, double tol = 1e-10);

}  // namespace sphmono
