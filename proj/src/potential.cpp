#include "sphmono/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sphmono/errors.hpp"
#include "sphmono/numerics.hpp"

namespace sphmono {

namespace {

constexpr double kDegenerateTol = 1e-8;   // |V_j''| below this -> degenerate
constexpr double kRootGridPoints = 2049;  // uniform samples of S(x) on [-1,1]
constexpr double kRootTol = 1e-13;        // bisection width for roots of S

}  // namespace

Potential::Potential(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty())
        throw InvalidInput("potential: coefficient list is empty");
    bool nonzero = std::any_of(c_.begin(), c_.end(), [](double c) { return c != 0.0; });
    if (!nonzero)
        throw InvalidInput("potential: all coefficients are zero (constant potential)");
}

Potential Potential::from_parameters(double omega, double eta, double lambda) {
    std::vector<double> c{-omega, -eta, -lambda};
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    return Potential(std::move(c));
}

double Potential::v_x(double x) const {
    // V = x*(c1 + x*(c2 + ...))
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc * x;
}

double Potential::v_x_prime(double x) const {
    double acc = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + double(k + 1) * c_[k];
    return acc;
}

double Potential::v_x_second(double x) const {
    if (c_.size() < 2) return 0.0;
    double acc = 0.0;
    for (std::size_t k = c_.size(); k-- > 1;) acc = acc * x + double(k + 1) * double(k) * c_[k];
    return acc;
}

double Potential::v(double theta) const { return v_x(std::cos(theta)); }

double Potential::v_prime(double theta) const {
    return -std::sin(theta) * v_x_prime(std::cos(theta));
}

double Potential::modified(double theta, double j) const {
    if (j == 0.0) return v(theta);
    double s = std::sin(theta);
    return j * j / (2.0 * s * s) + v(theta);
}

double Potential::modified_prime(double theta, double j) const {
    double vp = v_prime(theta);
    if (j == 0.0) return vp;
    double s = std::sin(theta);
    return vp - j * j * std::cos(theta) / (s * s * s);
}

double Potential::modified_second(double theta, double j) const {
    double x = std::cos(theta);
    double s = std::sin(theta);
    double vpp = v_x_second(x) * s * s - v_x_prime(x) * x;
    if (j == 0.0) return vpp;
    double s2 = s * s;
    return vpp + j * j * (1.0 / s2 + 3.0 * x * x / (s2 * s2));
}

double eval(const Potential& pot, double theta, double j, int derivative_order) {
    if (derivative_order != 0 && derivative_order != 1)
        throw InvalidInput("eval: derivative_order must be 0 or 1");
    if (j != 0.0 && !(theta > 0.0 && theta < M_PI))
        throw PoleSingularity("eval: V_j is singular at theta = 0, pi for j != 0");
    return derivative_order == 0 ? pot.modified(theta, j) : pot.modified_prime(theta, j);
}

std::vector<double> singular_poly(const Potential& pot, double j) {
    const auto& c = pot.coeffs();
    std::size_t n = c.size();
    // p = V'(x), ascending: p_i = (i+1) c_{i+1}
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = double(i + 1) * c[i];
    // S = -p * (1 - 2x^2 + x^4) - j^2 x
    std::vector<double> s(n + 4, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] -= p[i];
        s[i + 2] += 2.0 * p[i];
        s[i + 4] -= p[i];
    }
    s[1] -= j * j;
    return s;
}

double polyval(const std::vector<double>& coeffs, double x) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::vector<CriticalPoint> critical_points(const Potential& pot, double j) {
    if (std::abs(j) < kMomentumSnap) j = 0.0;
    // Factored evaluation keeps S(+-1) exact at j=0 (the (1-x^2)^2 factor).
    auto s = [&](double x) {
        double w = 1.0 - x * x;
        return -pot.v_x_prime(x) * w * w - j * j * x;
    };
    auto xs = find_roots(s, -1.0, 1.0, int(kRootGridPoints), kRootTol);

    std::vector<CriticalPoint> out;
    out.reserve(xs.size());
    for (double x : xs) {
        CriticalPoint cp;
        cp.x = x;
        cp.theta = std::acos(std::clamp(x, -1.0, 1.0));
        bool pole = (j == 0.0) && (x == 1.0 || x == -1.0);
        double vjpp;
        if (pole) {
            cp.h_crit = pot.v_x(x);
            // d^2V/dtheta^2 at the poles: -V'(1) at theta=0, +V'(-1) at theta=pi
            vjpp = (x == 1.0) ? -pot.v_x_prime(1.0) : pot.v_x_prime(-1.0);
        } else {
            cp.h_crit = (j == 0.0) ? pot.v_x(x) : pot.modified(cp.theta, j);
            vjpp = pot.modified_second(cp.theta, j);
        }
        if (std::abs(vjpp) < kDegenerateTol)
            cp.kind = CriticalKind::degenerate;
        else
            cp.kind = vjpp > 0.0 ? CriticalKind::minimum : CriticalKind::maximum;
        out.push_back(cp);
    }
    return out;
}

}  // namespace sphmono
