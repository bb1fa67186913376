#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace sphmono {

/** An improper integral with inverse-power endpoint singularities:
 *  the integrand behaves like C |x-end|^{-gamma} at each flagged endpoint.
 *  Only gamma = 1/2 is used here (simple turning points).
 */
struct SingularIntegral {
    double lower = 0.0;
    double upper = 1.0;
    bool singular_at_lower = false;
    bool singular_at_upper = false;
    double gamma = 0.5;
    double tol = 1e-10;  ///< relative tolerance
};

/// Result of extrapolating a sampled sequence to its j -> 0 limit.
struct LimitEstimate {
    double value = 0.0;
    double uncertainty = 0.0;
    bool converged = false;
    int samples_used = 0;
};

struct ExtrapolationOptions {
    double diff_tol = 1e-4;     ///< required closeness of the last two samples
    double accept_band = 1e-2;  ///< band around the nearest integer (or around the estimate)
    bool integer_mode = true;   ///< limits of 2*chi sequences are integers
};

/** Isolates roots of a continuous function on [a,b]: samples grid_n points,
 *  brackets sign changes, refines each bracket by bisection to width tol.
 *  Returns a strictly increasing list; an empty list means no bracket was
 *  found (not an error). More than 64 brackets throws TooManySignChanges.
 */
std::vector<double> find_roots(const std::function<double(double)>& f, double a, double b,
                               int grid_n, double tol);

/** Integral of g over [spec.lower, spec.upper] where g may diverge like
 *  |x-end|^{-1/2} at the flagged endpoints. The interval is split at the
 *  midpoint and on each half the substitution x = end -+ t^2 removes the
 *  singularity; the smooth result is integrated by adaptive Gauss-Kronrod
 *  quadrature. Throws ToleranceNotMet if refinement hits its depth cap with
 *  the error estimate above spec.tol.
 */
double integrate_singular(const std::function<double(double)>& g, const SingularIntegral& spec);

/** Endpoint-aware form: the integrand receives the abscissa x, the exact
 *  distance to the active endpoint (the substitution variable t^2, exact even
 *  when x rounds to the endpoint), and which endpoint it is measured from
 *  (-1 lower, +1 upper, 0 for an unsubstituted half). Lets integrands cancel
 *  the neighborhood of a turning point analytically.
 */
using EndpointAwareFn = std::function<double(double /*x*/, double /*dist*/, int /*end*/)>;
double integrate_singular(const EndpointAwareFn& g, const SingularIntegral& spec);

/// Adaptive G7-K15 quadrature of a smooth integrand, relative tolerance
/// rel_tol, interval-halving depth capped at depth_cap.
double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-10, int depth_cap = 40);

/** Limit of a sequence sampled at strictly decreasing j > 0 (at least four
 *  samples). Applies one level of geometric (Richardson) acceleration when
 *  the sample differences decay consistently; "converged" follows the
 *  ExtrapolationOptions criteria.
 */
LimitEstimate extrapolate_limit(const std::vector<std::pair<double, double>>& samples,
                                const ExtrapolationOptions& opt = {});

}  // namespace sphmono
