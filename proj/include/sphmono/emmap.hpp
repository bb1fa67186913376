#pragma once

#include <optional>
#include <vector>

#include "sphmono/potential.hpp"

namespace sphmono {

/// A point of the energy-momentum plane.
struct EMPoint {
    double h = 0.0;
    double j = 0.0;
};

enum class EMStatus { regular, critical, out_of_range };

struct EMClassification {
    EMStatus status = EMStatus::out_of_range;
    int r = 0;  ///< branch count when regular
    std::optional<double> nearest_critical_h;
};

/// A singular value on the j=0 axis.
struct SingularValue {
    double h = 0.0;
    double x = 0.0;       ///< critical point location in x = cos(theta)
    bool boundary = false;  ///< lies on the boundary of the EM range (global minimum)
};

/// One tracked locus h_c(j) of critical values of V_j.
struct CriticalCurve {
    int id = 0;
    bool boundary = false;  ///< global-minimum sheet; otherwise interior
    struct Sample {
        double j, h, x;
    };
    std::vector<Sample> samples;
    bool ended_early = false;  ///< root merged with another or left [-1,1] before j_max
};

/// Classification grid over a rectangle of the EM plane (row-major over j).
struct EMGrid {
    std::vector<double> h_values;
    std::vector<double> j_values;
    std::vector<EMClassification> cells;  ///< cells[jj * nh + ih]
};

/** Classifies (h,j): critical when h lies within crit_tol of a critical value
 *  of V_j (pole energies included at j=0), out of range when h < min V_j,
 *  regular otherwise with the branch count r.
 */
EMClassification classify(const Potential& pot, double h, double j, double crit_tol = 1e-9);

/// Critical energies at j=0 (pole values V(0), V(pi) included), each tagged
/// boundary (global minimum of V) or isolated (interior of the EM range).
std::vector<SingularValue> singular_values_j0(const Potential& pot);

/** Tracks the critical values of V_j from j=0 up to j_max on an n_samples
 *  grid by nearest-neighbor continuation in x (one refinement level, then
 *  TrackingLost). Curves whose root merges or exits [-1,1] end early;
 *  isolated singular values appear as single-sample curves.
 */
std::vector<CriticalCurve> critical_curves(const Potential& pot, double j_max, int n_samples);

/// Deterministic classification grid; rows are classified concurrently.
EMGrid em_grid(const Potential& pot, double h_min, double h_max, double j_min, double j_max,
               int nh, int nj);

}  // namespace sphmono
