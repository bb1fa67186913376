#pragma once

#include <optional>
#include <vector>

#include "sphmono/actions.hpp"
#include "sphmono/emmap.hpp"
#include "sphmono/numerics.hpp"
#include "sphmono/potential.hpp"

namespace sphmono {

/** A closed rectangle path in the (h,j) plane crossing the line j=0 at the
 *  energies a < b, reaching |j| = j_amplitude. Both crossings must classify
 *  regular and the whole path must avoid critical values.
 */
struct Circuit {
    double a = 0.0;
    double b = 0.0;
    double j_amplitude = 0.5;
    int orientation = +1;  // counterclockwise
};

enum class Side { plus, minus };

/// One evaluation of 2*chi along the j sequence.
struct DeltaSample {
    double j;        ///< signed momentum of the evaluation
    double two_chi;
};

/// The extrapolated integer datum Delta = lim 2*chi at a j=0 crossing.
struct DeltaResult {
    double value_real = 0.0;
    long value_int = 0;
    double residual = 0.0;  ///< |value_real - value_int|
    Side side = Side::plus;
    double seed_theta = 0.0;
    double uncertainty = 0.0;
    std::vector<DeltaSample> samples;
};

struct DeltaOptions {
    double j_start = 0.5;
    double j_floor = 1e-5;
    double quad_tol = 1e-10;
    ExtrapolationOptions extrapolation;
};

/// A non-regular point found on a circuit, or a branch-count change between
/// adjacent path samples (the path crossed a critical curve).
struct CircuitViolation {
    EMPoint point;
    std::optional<double> nearest_critical_h;
};

struct MonodromyReport {
    DeltaResult delta_a;
    DeltaResult delta_b;
    long index = 0;  ///< delta_b.value_int - delta_a.value_int
    bool has_monodromy = false;
    TransferMatrix transfer_a;
    TransferMatrix transfer_b;
    std::optional<DeltaResult> delta_a_minus;  ///< side consistency check
    std::optional<DeltaResult> delta_b_minus;
};

struct MonodromyOptions {
    DeltaOptions delta;
    std::optional<double> seed_a;  ///< branch seed at (a,0); default: unique branch
    std::optional<double> seed_b;
    bool check_minus_side = true;
    int circuit_samples = 200;
};

/** Evaluates 2*chi(a, j_k) along j_k = j_start * 2^{-k} (side selects the
 *  sign of j) on the branch seeded by seed_theta at the largest usable j and
 *  continued by interval overlap, then extrapolates the j -> 0 limit.
 *  Throws NonConvergent if the sequence fails the acceptance criteria and
 *  BranchLost if the tracked branch vanishes.
 */
DeltaResult delta_at(const Potential& pot, double a, Side side, double seed_theta,
                     const DeltaOptions& opt = {});

/// Samples the circuit path (n_samples points) and lists every violation:
/// non-regular classifications and branch-count changes between neighbors.
std::vector<CircuitViolation> circuit_check(const Potential& pot, const Circuit& circuit,
                                            int n_samples = 200);

/** The monodromy test: validates the circuit, evaluates Delta at both j=0
 *  crossings (concurrently), and reports the integer index
 *  Delta(b,0) - Delta(a,0) with has_monodromy = (index != 0).
 */
MonodromyReport monodromy_test(const Potential& pot, const Circuit& circuit,
                               const MonodromyOptions& opt = {});

}  // namespace sphmono
