#include "sphmono/actions.hpp"

#include <cmath>
#include <limits>

#include "radial_ke.hpp"
#include "sphmono/errors.hpp"
#include "sphmono/numerics.hpp"

namespace sphmono {

namespace {

SingularIntegral branch_spec(const OrbitBranch& branch, double tol) {
    SingularIntegral spec;
    spec.lower = branch.alpha_minus;
    spec.upper = branch.alpha_plus;
    spec.singular_at_lower = !branch.open_left;
    spec.singular_at_upper = !branch.open_right;
    spec.tol = tol;
    return spec;
}

OrbitBranch mirrored_branch(const Potential& pot, double h, double j,
                            const OrbitBranch& branch) {
    auto brs = branches(pot, h, j);
    for (const auto& b : brs) {
        double lo = std::max(b.alpha_minus, branch.alpha_minus);
        double hi = std::min(b.alpha_plus, branch.alpha_plus);
        if (hi > lo) return b;
    }
    throw BranchLost("transfer_matrix: no branch at (h,-j) overlaps the given branch");
}

}  // namespace

double chi(const Potential& pot, double h, double j, const OrbitBranch& branch, double tol) {
    if (j == 0.0) throw PoleSingularity("chi: requires j != 0");
    if (branch.open_left || branch.open_right)
        throw InvalidInput("chi: requires a closed branch (0 < alpha- < alpha+ < pi)");
    RadialKE ke(pot, h, j, branch);
    EndpointAwareFn g = [&](double theta, double dist, int end) {
        double s = std::sin(theta);
        return 1.0 / (s * s * std::sqrt(2.0 * ke(theta, dist, end)));
    };
    return -(j / M_PI) * integrate_singular(g, branch_spec(branch, tol));
}

double beta(const Potential& pot, double h, double j, const OrbitBranch& branch, double tol) {
    RadialKE ke(pot, h, j, branch);
    EndpointAwareFn g = [&](double theta, double dist, int end) {
        return 1.0 / std::sqrt(2.0 * ke(theta, dist, end));
    };
    return integrate_singular(g, branch_spec(branch, tol)) / M_PI;
}

double action_I1(const Potential& pot, double h, double j, const OrbitBranch& branch,
                 double tol) {
    RadialKE ke(pot, h, j, branch);
    EndpointAwareFn g = [&](double theta, double dist, int end) {
        return std::sqrt(2.0 * ke(theta, dist, end));
    };
    return integrate_singular(g, branch_spec(branch, tol)) / M_PI;
}

TransferMatrix transfer_matrix(const Potential& pot, double h, double j,
                               const OrbitBranch& branch, double tol) {
    if (!(j > 0.0)) throw InvalidInput("transfer_matrix: requires j > 0");
    double beta_plus = beta(pot, h, j, branch, tol);
    double chi_plus = chi(pot, h, j, branch, tol);
    OrbitBranch minus = mirrored_branch(pot, h, -j, branch);
    double beta_minus = beta(pot, h, -j, minus, tol);
    double chi_minus = chi(pot, h, -j, minus, tol);

    // [[b+, c+],[0,1]] * [[1/b-, -c-/b-],[0,1]]
    TransferMatrix m;
    m.m11 = beta_plus / beta_minus;
    m.m12 = chi_plus - beta_plus * chi_minus / beta_minus;
    m.m21 = 0.0;
    m.m22 = 1.0;
    return m;
}

ActionValues action_values(const Potential& pot, double h, double j, const OrbitBranch& branch,
                           double tol) {
    ActionValues v;
    v.I1 = action_I1(pot, h, j, branch, tol);
    v.I2 = j;
    v.beta = beta(pot, h, j, branch, tol);
    v.chi = chi(pot, h, j, branch, tol);
    v.h = h;
    v.j = j;
    v.branch_index = branch.branch_index;
    return v;
}

}  // namespace sphmono
