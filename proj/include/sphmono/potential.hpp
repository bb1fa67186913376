#pragma once

#include <vector>

namespace sphmono {

enum class CriticalKind { minimum, maximum, degenerate };

/// |j| below this is indistinguishable from zero in double precision (the
/// turning points nearest the poles fall within one ulp of 0 or pi);
/// critical_points, branches and classify treat such j as exactly zero.
inline constexpr double kMomentumSnap = 1e-13;

/// A critical point of the modified potential V_j, located through the
/// singular-point polynomial in x = cos(theta).
struct CriticalPoint {
    double x;       ///< root in [-1,1]
    double theta;   ///< arccos(x)
    double h_crit;  ///< V_j at the critical angle (V itself at the poles when j=0)
    CriticalKind kind;
};

/** Azimuthally symmetric potential V(theta) = sum_{k=1..N} c_k cos^k(theta).
 *  Evenness and 2pi-periodicity hold automatically in this basis. At least one
 *  coefficient must be nonzero (constant potentials are rejected).
 */
class Potential {
public:
    explicit Potential(std::vector<double> coeffs);

    /// Generic three-parameter potential
    /// V(theta) = -omega*cos(theta) - eta*cos^2(theta) - lambda*cos^3(theta).
    static Potential from_parameters(double omega, double eta = 0.0, double lambda = 0.0);

    const std::vector<double>& coeffs() const { return c_; }

    double v(double theta) const;        ///< V(theta)
    double v_prime(double theta) const;  ///< dV/dtheta

    // polynomial view in x = cos(theta)
    double v_x(double x) const;
    double v_x_prime(double x) const;
    double v_x_second(double x) const;

    /// V_j(theta) = j^2/(2 sin^2 theta) + V(theta); equals V for j=0.
    double modified(double theta, double j) const;
    double modified_prime(double theta, double j) const;
    double modified_second(double theta, double j) const;

private:
    std::vector<double> c_;  // c_1..c_N
};

/** V_j(theta) (derivative_order 0) or dV_j/dtheta (derivative_order 1).
 *  For j=0 the poles theta=0,pi are allowed; for j!=0 they throw
 *  PoleSingularity.
 */
double eval(const Potential& pot, double theta, double j, int derivative_order = 0);

/** Ascending coefficients of the singular-point polynomial
 *      S(x) = -V'(x) (1-x^2)^2 - j^2 x,
 *  whose real roots in [-1,1] are the critical points of V_j (for j=0 the
 *  roots x=+-1 correspond to the poles). For the generic potential this is
 *  (omega + 2 eta x + 3 lambda x^2)(1-x^2)^2 - j^2 x.
 */
std::vector<double> singular_poly(const Potential& pot, double j);

/// Evaluates a polynomial given by ascending coefficients.
double polyval(const std::vector<double>& coeffs, double x);

/** All roots of the singular-point polynomial in [-1,1], sorted by x, each
 *  with its critical energy and minimum/maximum type. Roots where
 *  |V_j''| < 1e-8 are flagged degenerate rather than split.
 */
std::vector<CriticalPoint> critical_points(const Potential& pot, double j);

}  // namespace sphmono
