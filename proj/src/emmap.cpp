#include "sphmono/emmap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "sphmono/dynamics.hpp"
#include "sphmono/errors.hpp"

namespace sphmono {

namespace {

constexpr double kTrackingJump = 0.1;  // max |dx| between adjacent j samples

double min_critical_value(const std::vector<CriticalPoint>& crit) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& cp : crit) m = std::min(m, cp.h_crit);
    return m;
}

}  // namespace

EMClassification classify(const Potential& pot, double h, double j, double crit_tol) {
    auto crit = critical_points(pot, j);
    EMClassification out;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& cp : crit) {
        if (std::abs(h - cp.h_crit) < std::abs(h - best)) best = cp.h_crit;
    }
    if (std::isfinite(best)) out.nearest_critical_h = best;

    if (std::isfinite(best) && std::abs(h - best) < crit_tol) {
        out.status = EMStatus::critical;
        return out;
    }
    if (h < min_critical_value(crit)) {
        out.status = EMStatus::out_of_range;
        return out;
    }
    out.status = EMStatus::regular;
    out.r = int(branches(pot, h, j).size());
    return out;
}

std::vector<SingularValue> singular_values_j0(const Potential& pot) {
    auto crit = critical_points(pot, 0.0);
    double h_min = min_critical_value(crit);
    std::vector<SingularValue> out;
    out.reserve(crit.size());
    for (const auto& cp : crit) {
        SingularValue sv;
        sv.h = cp.h_crit;
        sv.x = cp.x;
        sv.boundary = std::abs(cp.h_crit - h_min) <= 1e-12 * (1.0 + std::abs(h_min));
        out.push_back(sv);
    }
    return out;
}

std::vector<CriticalCurve> critical_curves(const Potential& pot, double j_max, int n_samples) {
    if (!(j_max > 0.0)) throw InvalidInput("critical_curves: j_max must be positive");
    if (n_samples < 2) throw InvalidInput("critical_curves: n_samples must be >= 2");

    std::vector<CriticalCurve> curves;
    std::vector<int> live;  // indices of curves still tracked

    auto roots_at = [&](double j) { return critical_points(pot, j); };

    auto seed = [&](double j, const CriticalPoint& cp) {
        CriticalCurve c;
        c.id = int(curves.size());
        c.samples.push_back({j, cp.h_crit, cp.x});
        curves.push_back(std::move(c));
        live.push_back(curves.back().id);
    };

    const double step = j_max / double(n_samples - 1);
    auto first = roots_at(0.0);
    for (const auto& cp : first) seed(0.0, cp);

    for (int i = 1; i < n_samples; ++i) {
        double j = double(i) * step;
        auto roots = roots_at(j);
        std::vector<bool> taken(roots.size(), false);

        // greedy nearest-neighbor assignment, closest pairs first; a long hop
        // is validated once through the midpoint of the j step
        struct Cand {
            double dist;
            std::size_t live_idx, root_idx;
        };
        std::vector<Cand> cands;
        for (std::size_t li = 0; li < live.size(); ++li) {
            double x_prev = curves[live[li]].samples.back().x;
            for (std::size_t ri = 0; ri < roots.size(); ++ri)
                cands.push_back({std::abs(roots[ri].x - x_prev), li, ri});
        }
        std::sort(cands.begin(), cands.end(),
                  [](const Cand& a, const Cand& b) { return a.dist < b.dist; });

        std::vector<bool> matched(live.size(), false);
        for (const auto& c : cands) {
            if (matched[c.live_idx] || taken[c.root_idx]) continue;
            if (c.dist > kTrackingJump) {
                double x_prev = curves[live[c.live_idx]].samples.back().x;
                auto mid = roots_at(j - 0.5 * step);
                double best_mid = std::numeric_limits<double>::infinity();
                double x_mid = 0.0;
                for (const auto& m : mid) {
                    if (std::abs(m.x - x_prev) < best_mid) {
                        best_mid = std::abs(m.x - x_prev);
                        x_mid = m.x;
                    }
                }
                double hop2 = std::abs(roots[c.root_idx].x - x_mid);
                if (best_mid > kTrackingJump || hop2 > kTrackingJump) continue;  // no link
            }
            matched[c.live_idx] = true;
            taken[c.root_idx] = true;
            curves[live[c.live_idx]].samples.push_back({j, roots[c.root_idx].h_crit,
                                                        roots[c.root_idx].x});
        }

        // Unclaimed roots next to unmatched curves mean the grid is too
        // coarse to decide between a jump and a merge/birth pair.
        bool unmatched_curve = false;
        for (std::size_t li = 0; li < live.size(); ++li)
            unmatched_curve = unmatched_curve || !matched[li];
        bool unclaimed_root = false;
        for (std::size_t ri = 0; ri < roots.size(); ++ri)
            unclaimed_root = unclaimed_root || !taken[ri];
        if (unmatched_curve && unclaimed_root)
            throw TrackingLost("critical_curves: root continuation jump exceeds 0.1");

        std::vector<int> still_live;
        for (std::size_t li = 0; li < live.size(); ++li) {
            if (matched[li])
                still_live.push_back(live[li]);
            else
                curves[live[li]].ended_early = true;  // merged or exited [-1,1]
        }
        live = std::move(still_live);
        for (std::size_t ri = 0; ri < roots.size(); ++ri)
            if (!taken[ri]) seed(j, roots[ri]);  // curve born away from j=0
    }

    // The boundary sheet carries the global minimum of the critical values.
    for (auto& c : curves) {
        if (c.samples.empty()) continue;
        int hits = 0;
        for (const auto& s : c.samples) {
            double m = min_critical_value(roots_at(s.j));
            if (std::abs(s.h - m) <= 1e-9 * (1.0 + std::abs(m))) ++hits;
        }
        c.boundary = hits * 2 > int(c.samples.size());
    }
    return curves;
}

EMGrid em_grid(const Potential& pot, double h_min, double h_max, double j_min, double j_max,
               int nh, int nj) {
    if (nh < 2 || nj < 2) throw InvalidInput("em_grid: nh and nj must be >= 2");

    EMGrid grid;
    grid.h_values.resize(nh);
    grid.j_values.resize(nj);
    for (int i = 0; i < nh; ++i)
        grid.h_values[i] = h_min + double(i) * (h_max - h_min) / double(nh - 1);
    for (int i = 0; i < nj; ++i)
        grid.j_values[i] = j_min + double(i) * (j_max - j_min) / double(nj - 1);
    grid.cells.resize(std::size_t(nh) * std::size_t(nj));

    std::atomic<int> next_row{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        try {
            for (int jj = next_row.fetch_add(1); jj < nj; jj = next_row.fetch_add(1)) {
                for (int ih = 0; ih < nh; ++ih)
                    grid.cells[std::size_t(jj) * std::size_t(nh) + std::size_t(ih)] =
                        classify(pot, grid.h_values[ih], grid.j_values[jj]);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    unsigned n_threads = std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return grid;
}

}  // namespace sphmono
