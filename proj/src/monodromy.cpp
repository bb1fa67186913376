#include "sphmono/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "sphmono/dynamics.hpp"
#include "sphmono/errors.hpp"

namespace sphmono {

namespace {

const OrbitBranch* containing(const std::vector<OrbitBranch>& brs, double theta) {
    for (const auto& b : brs)
        if (theta > b.alpha_minus && theta < b.alpha_plus) return &b;
    return nullptr;
}

const OrbitBranch* best_overlap(const std::vector<OrbitBranch>& brs, double lo, double hi) {
    const OrbitBranch* best = nullptr;
    double best_len = 0.0;
    for (const auto& b : brs) {
        double len = std::min(b.alpha_plus, hi) - std::max(b.alpha_minus, lo);
        if (len > best_len) {
            best_len = len;
            best = &b;
        }
    }
    return best;
}

// Auto-seed: midpoint of the single branch at (h, sign * j_start), shrinking
// j until a branch exists.
double auto_seed(const Potential& pot, double h, double sign, const DeltaOptions& opt) {
    for (double j = opt.j_start; j >= opt.j_floor; j *= 0.5) {
        std::vector<OrbitBranch> brs;
        try {
            brs = branches(pot, h, sign * j);
        } catch (const InvalidInput&) {
            continue;
        }
        if (brs.size() > 1)
            throw InvalidInput("monodromy: several branches at the circuit crossing; "
                               "provide a seed theta");
        return 0.5 * (brs[0].alpha_minus + brs[0].alpha_plus);
    }
    throw NoOrbit("monodromy: no branch found at the circuit crossing for any j in the sequence");
}

}  // namespace

DeltaResult delta_at(const Potential& pot, double a, Side side, double seed_theta,
                     const DeltaOptions& opt) {
    if (!(opt.j_start > 0.0) || !(opt.j_floor > 0.0) || opt.j_floor > opt.j_start)
        throw InvalidInput("delta_at: requires 0 < j_floor <= j_start");
    if (classify(pot, a, 0.0).status != EMStatus::regular)
        throw CriticalValue("delta_at: (a,0) is not a regular value");

    const double sign = side == Side::plus ? 1.0 : -1.0;

    DeltaResult res;
    res.side = side;
    res.seed_theta = seed_theta;

    std::vector<std::pair<double, double>> seq;  // (|j|, 2 chi)
    double track_lo = 0.0, track_hi = 0.0;
    bool tracking = false;
    LimitEstimate est;

    for (double j = opt.j_start; j >= opt.j_floor * (1.0 - 1e-12); j *= 0.5) {
        std::vector<OrbitBranch> brs;
        try {
            brs = branches(pot, a, sign * j);
        } catch (const NoOrbit&) {
            if (tracking) throw BranchLost("delta_at: tracked branch vanished along the j sequence");
            continue;  // j still too large for any orbit at this energy
        } catch (const CriticalValue&) {
            if (tracking) throw BranchLost("delta_at: hit a critical value along the j sequence");
            continue;
        }
        const OrbitBranch* br = nullptr;
        if (!tracking) {
            br = containing(brs, seed_theta);
            if (br == nullptr)
                throw BranchLost("delta_at: seed theta lies in no branch at the largest usable j");
        } else {
            br = best_overlap(brs, track_lo, track_hi);
            if (br == nullptr)
                throw BranchLost("delta_at: no branch overlaps the tracked interval");
        }
        track_lo = br->alpha_minus;
        track_hi = br->alpha_plus;
        tracking = true;

        double two_chi = 2.0 * chi(pot, a, sign * j, *br, opt.quad_tol);
        seq.emplace_back(j, two_chi);
        res.samples.push_back({sign * j, two_chi});

        if (seq.size() >= 4) {
            est = extrapolate_limit(seq, opt.extrapolation);
            if (est.converged) break;
        }
    }

    if (seq.size() < 4)
        throw NonConvergent("delta_at: fewer than 4 usable samples in the j sequence");
    if (!est.converged) est = extrapolate_limit(seq, opt.extrapolation);
    if (!est.converged)
        throw NonConvergent("delta_at: 2 chi sequence did not converge to an integer");

    res.value_real = est.value;
    res.value_int = std::lround(est.value);
    res.residual = std::abs(est.value - double(res.value_int));
    res.uncertainty = est.uncertainty;
    return res;
}

std::vector<CircuitViolation> circuit_check(const Potential& pot, const Circuit& circuit,
                                            int n_samples) {
    if (!(circuit.a < circuit.b))
        throw InvalidInput("circuit_check: requires a < b");
    if (!(circuit.j_amplitude > 0.0))
        throw InvalidInput("circuit_check: requires j_amplitude > 0");
    if (n_samples < 8) throw InvalidInput("circuit_check: too few samples");

    const double a = circuit.a, b = circuit.b, J = circuit.j_amplitude;
    // rectangle corners, traversed counterclockwise from (a,0)
    const EMPoint corners[7] = {{a, 0.0}, {a, -J}, {b, -J}, {b, 0.0},
                                {b, J},   {a, J},  {a, 0.0}};
    double perimeter = 0.0;
    double seg_len[6];
    for (int s = 0; s < 6; ++s) {
        seg_len[s] = std::abs(corners[s + 1].h - corners[s].h) +
                     std::abs(corners[s + 1].j - corners[s].j);
        perimeter += seg_len[s];
    }

    std::vector<CircuitViolation> violations;
    int prev_r = -1;
    EMPoint prev_pt{};
    for (int i = 0; i < n_samples; ++i) {
        double arc = perimeter * double(i) / double(n_samples);
        int s = 0;
        while (s < 5 && arc > seg_len[s]) {
            arc -= seg_len[s];
            ++s;
        }
        double frac = seg_len[s] > 0.0 ? arc / seg_len[s] : 0.0;
        EMPoint pt{corners[s].h + frac * (corners[s + 1].h - corners[s].h),
                   corners[s].j + frac * (corners[s + 1].j - corners[s].j)};

        EMClassification cls;
        bool classify_failed = false;
        try {
            cls = classify(pot, pt.h, pt.j);
        } catch (const std::exception&) {
            classify_failed = true;
        }
        if (classify_failed || cls.status != EMStatus::regular) {
            violations.push_back({pt, classify_failed ? std::nullopt : cls.nearest_critical_h});
            prev_r = -1;
        } else {
            // a change of branch count between neighbors marks a crossed critical curve
            if (prev_r >= 0 && cls.r != prev_r) {
                EMPoint mid{0.5 * (pt.h + prev_pt.h), 0.5 * (pt.j + prev_pt.j)};
                auto mid_cls = classify(pot, mid.h, mid.j);
                violations.push_back({mid, mid_cls.nearest_critical_h});
            }
            prev_r = cls.r;
        }
        prev_pt = pt;
    }
    return violations;
}

MonodromyReport monodromy_test(const Potential& pot, const Circuit& circuit,
                               const MonodromyOptions& opt) {
    if (!(circuit.a < circuit.b))
        throw InvalidInput("monodromy_test: requires a < b");

    DeltaOptions dopt = opt.delta;
    dopt.j_start = std::min(dopt.j_start, circuit.j_amplitude);

    double seed_a = opt.seed_a ? *opt.seed_a : auto_seed(pot, circuit.a, 1.0, dopt);
    double seed_b = opt.seed_b ? *opt.seed_b : auto_seed(pot, circuit.b, 1.0, dopt);

    auto fa = std::async(std::launch::async,
                         [&] { return delta_at(pot, circuit.a, Side::plus, seed_a, dopt); });
    auto fb = std::async(std::launch::async,
                         [&] { return delta_at(pot, circuit.b, Side::plus, seed_b, dopt); });
    auto violations = circuit_check(pot, circuit, opt.circuit_samples);

    MonodromyReport rep;
    try {
        rep.delta_a = fa.get();
        rep.delta_b = fb.get();
    } catch (...) {
        if (!violations.empty())
            throw InvalidCircuit("monodromy_test: circuit crosses non-regular values");
        throw;
    }
    if (!violations.empty()) {
        std::ostringstream msg;
        msg << "monodromy_test: circuit fails validation at " << violations.size()
            << " sampled points (first at h=" << violations.front().point.h
            << ", j=" << violations.front().point.j << ")";
        throw InvalidCircuit(msg.str());
    }

    rep.index = rep.delta_b.value_int - rep.delta_a.value_int;
    rep.has_monodromy = rep.index != 0;

    double j_rep = std::max(std::min(0.25, circuit.j_amplitude / 2.0), 2.0 * dopt.j_floor);
    auto rep_branch = [&](double h, double seed) {
        auto brs = branches(pot, h, j_rep);
        const OrbitBranch* br = containing(brs, seed);
        return br != nullptr ? *br : brs.front();
    };
    rep.transfer_a = transfer_matrix(pot, circuit.a, j_rep, rep_branch(circuit.a, seed_a),
                                     dopt.quad_tol);
    rep.transfer_b = transfer_matrix(pot, circuit.b, j_rep, rep_branch(circuit.b, seed_b),
                                     dopt.quad_tol);

    if (opt.check_minus_side) {
        rep.delta_a_minus = delta_at(pot, circuit.a, Side::minus, seed_a, dopt);
        rep.delta_b_minus = delta_at(pot, circuit.b, Side::minus, seed_b, dopt);
    }
    return rep;
}

}  // namespace sphmono
