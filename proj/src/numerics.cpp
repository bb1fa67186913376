#include "sphmono/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "sphmono/errors.hpp"

namespace sphmono {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1,1]; node, Gauss weight
// (zero for Kronrod-only nodes), Kronrod weight.
constexpr double kG7K15[8][3] = {
    {0.0000000000000000, 0.4179591836734694, 0.2094821410847278},
    {0.4058451513773972, 0.3818300505051189, 0.1903505780647854},
    {0.7415311855993945, 0.2797053914892767, 0.1406532597155259},
    {0.9491079123427585, 0.1294849661688697, 0.0630920926299786},
    {0.2077849550078985, 0.0000000000000000, 0.2044329400752989},
    {0.5860872354676911, 0.0000000000000000, 0.1690047266392679},
    {0.8648644233597691, 0.0000000000000000, 0.1047900103222502},
    {0.9914553711208126, 0.0000000000000000, 0.0229353220105292},
};

struct PanelEstimate {
    double value;
    double error;
};

PanelEstimate g7k15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    double fv[15];
    fv[0] = f(mid);
    double g7 = kG7K15[0][1] * fv[0];
    double k15 = kG7K15[0][2] * fv[0];
    double resabs = kG7K15[0][2] * std::abs(fv[0]);
    for (int i = 1; i < 8; ++i) {
        double dx = hl * kG7K15[i][0];
        double lo = f(mid - dx), hi = f(mid + dx);
        fv[2 * i - 1] = lo;
        fv[2 * i] = hi;
        g7 += kG7K15[i][1] * (lo + hi);
        k15 += kG7K15[i][2] * (lo + hi);
        resabs += kG7K15[i][2] * (std::abs(lo) + std::abs(hi));
    }
    // classical dqk15 error estimate: scale |K15-G7| by the variation resasc
    double reskh = 0.5 * k15;
    double resasc = kG7K15[0][2] * std::abs(fv[0] - reskh);
    for (int i = 1; i < 8; ++i)
        resasc += kG7K15[i][2] * (std::abs(fv[2 * i - 1] - reskh) + std::abs(fv[2 * i] - reskh));
    resasc *= std::abs(hl);
    resabs *= std::abs(hl);
    double value = k15 * hl;
    double err = std::abs((k15 - g7) * hl);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / eps50)
        err = std::max(eps50 * resabs, err);
    return {value, err};
}

struct Panel {
    double a, b;
    double value, error;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
};

double bisect(const std::function<double(double)>& f, double lo, double hi, double flo,
              double tol) {
    // flo carries the sign of f at lo; stops at width <= tol
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> find_roots(const std::function<double(double)>& f, double a, double b,
                               int grid_n, double tol) {
    if (!(a < b)) throw InvalidInput("find_roots: requires a < b");
    if (grid_n < 2) throw InvalidInput("find_roots: grid_n must be >= 2");

    std::vector<double> roots;
    const double step = (b - a) / double(grid_n - 1);
    double x_prev = a;
    double f_prev = f(a);
    if (f_prev == 0.0) roots.push_back(a);
    int brackets = 0;
    for (int i = 1; i < grid_n; ++i) {
        double x = (i == grid_n - 1) ? b : a + double(i) * step;
        double fx = f(x);
        if (fx == 0.0) {
            roots.push_back(x);
        } else if (f_prev != 0.0 && (f_prev < 0.0) != (fx < 0.0)) {
            if (++brackets > 64)
                throw TooManySignChanges("find_roots: more than 64 sign changes");
            roots.push_back(bisect(f, x_prev, x, f_prev, tol));
        }
        x_prev = x;
        f_prev = fx;
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double u, double v) { return std::abs(u - v) <= tol; }),
                roots.end());
    return roots;
}

double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, int depth_cap) {
    if (a == b) return 0.0;

    std::priority_queue<Panel> queue;
    auto first = g7k15(f, a, b);
    queue.push({a, b, first.value, first.error, 0});
    double total = first.value;
    double total_err = first.error;
    bool cap_hit = false;

    const int max_panels = 200000;  // hard safety stop
    int panels = 1;
    while (total_err > rel_tol * std::max(std::abs(total), 1e-300) && !queue.empty()) {
        Panel worst = queue.top();
        if (worst.depth >= depth_cap || panels >= max_panels) {
            cap_hit = true;
            break;
        }
        queue.pop();
        double mid = 0.5 * (worst.a + worst.b);
        auto left = g7k15(f, worst.a, mid);
        auto right = g7k15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push({worst.a, mid, left.value, left.error, worst.depth + 1});
        queue.push({mid, worst.b, right.value, right.error, worst.depth + 1});
        ++panels;
    }
    if (cap_hit && total_err > rel_tol * std::max(std::abs(total), 1e-300))
        throw ToleranceNotMet(
            "adaptive_quad: refinement cap reached with error estimate above tolerance");
    return total;
}

double integrate_singular(const EndpointAwareFn& g, const SingularIntegral& spec) {
    const double a = spec.lower, b = spec.upper;
    if (!(a < b)) throw InvalidInput("integrate_singular: requires lower < upper");
    if (!(spec.gamma >= 0.0 && spec.gamma < 1.0))
        throw InvalidInput("integrate_singular: gamma must lie in [0,1)");

    const double c = 0.5 * (a + b);
    const int depth_cap = 40;

    double lower_half;
    if (spec.singular_at_lower) {
        // x = a + t^2, dx = 2t dt
        auto sub = [&](double t) { return 2.0 * t * g(a + t * t, t * t, -1); };
        lower_half = adaptive_quad(sub, 0.0, std::sqrt(c - a), spec.tol, depth_cap);
    } else {
        auto plain = [&](double x) { return g(x, 0.0, 0); };
        lower_half = adaptive_quad(plain, a, c, spec.tol, depth_cap);
    }

    double upper_half;
    if (spec.singular_at_upper) {
        // x = b - t^2
        auto sub = [&](double t) { return 2.0 * t * g(b - t * t, t * t, +1); };
        upper_half = adaptive_quad(sub, 0.0, std::sqrt(b - c), spec.tol, depth_cap);
    } else {
        auto plain = [&](double x) { return g(x, 0.0, 0); };
        upper_half = adaptive_quad(plain, c, b, spec.tol, depth_cap);
    }
    return lower_half + upper_half;
}

double integrate_singular(const std::function<double(double)>& g, const SingularIntegral& spec) {
    EndpointAwareFn wrapped = [&](double x, double, int) { return g(x); };
    return integrate_singular(wrapped, spec);
}

LimitEstimate extrapolate_limit(const std::vector<std::pair<double, double>>& samples,
                                const ExtrapolationOptions& opt) {
    const std::size_t n = samples.size();
    if (n < 4) throw InvalidInput("extrapolate_limit: at least 4 samples required");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(samples[i].first > 0.0))
            throw InvalidInput("extrapolate_limit: all j must be positive");
        if (i > 0 && !(samples[i].first < samples[i - 1].first))
            throw InvalidInput("extrapolate_limit: j must be strictly decreasing");
    }

    // One geometric-tail correction of the sample ending at index m when the
    // differences decay consistently (error ~ C j^p gives a stable ratio
    // d_prev/d_last on a geometric grid); otherwise the raw sample.
    auto accelerated = [&](std::size_t m) {
        double v2 = samples[m].second;
        double v1 = samples[m - 1].second;
        double v0 = samples[m - 2].second;
        double d_last = v2 - v1;
        double d_prev = v1 - v0;
        if (d_last != 0.0) {
            double q = d_prev / d_last;
            if (q > 1.3 && q < 16.0) return v2 + d_last / (q - 1.0);
        }
        return v2;
    };

    LimitEstimate est;
    est.samples_used = int(n);
    double l_now = accelerated(n - 1);
    double l_prev = accelerated(n - 2);
    est.value = l_now;
    est.uncertainty = std::abs(l_now - l_prev);

    bool settled = est.uncertainty < opt.diff_tol;
    bool within_band;
    if (opt.integer_mode) {
        double nearest = std::nearbyint(est.value);
        within_band = std::abs(est.value - nearest) < opt.accept_band;
    } else {
        within_band = est.uncertainty < opt.accept_band;
    }
    est.converged = settled && within_band && est.uncertainty < opt.accept_band;
    return est;
}

}  // namespace sphmono
