#pragma once

#include "sphmono/dynamics.hpp"
#include "sphmono/potential.hpp"

namespace sphmono {

/// Actions and their (h,j)-derivatives on one branch.
struct ActionValues {
    double I1 = 0.0;    ///< radial action
    double I2 = 0.0;    ///< azimuthal action, equal to j
    double beta = 0.0;  ///< dI1/dh
    double chi = 0.0;   ///< dI1/dj
    double h = 0.0;
    double j = 0.0;
    int branch_index = 0;
};

/// DI(h,j) * DI(h,-j)^{-1}; equals [[1, 2 chi],[0,1]] for valid inputs.
struct TransferMatrix {
    double m11 = 1.0, m12 = 0.0;
    double m21 = 0.0, m22 = 1.0;
    double det() const { return m11 * m22 - m12 * m21; }
};

/** Rotation quantity
 *    chi = -(j/pi) * integral of dtheta / (sqrt(2(h - V_j)) sin^2 theta)
 *  over the branch; requires j != 0 and a closed branch
 *  (0 < alpha_minus < alpha_plus < pi). Finite: the integrand singularity at
 *  the turning points is of order |theta - alpha|^{-1/2}.
 */
double chi(const Potential& pot, double h, double j, const OrbitBranch& branch,
           double tol = 1e-10);

/// beta = (1/pi) * integral of dtheta / sqrt(2(h - V_j)) > 0; equals T/(2 pi).
double beta(const Potential& pot, double h, double j, const OrbitBranch& branch,
            double tol = 1e-10);

/// I1 = (1/pi) * integral of sqrt(2(h - V_j)) dtheta >= 0.
double action_I1(const Potential& pot, double h, double j, const OrbitBranch& branch,
                 double tol = 1e-10);

/** Assembles DI(h,j) = [[beta, chi],[0,1]] and DI(h,-j) from independent
 *  quadratures at +-j and returns DI(h,j) DI(h,-j)^{-1}. Requires j > 0.
 */
TransferMatrix transfer_matrix(const Potential& pot, double h, double j,
                               const OrbitBranch& branch, double tol = 1e-10);

/// Convenience bundle of I1, I2, beta, chi at one point (requires j != 0).
ActionValues action_values(const Potential& pot, double h, double j, const OrbitBranch& branch,
                           double tol = 1e-10);

}  // namespace sphmono
