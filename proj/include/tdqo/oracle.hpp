#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "tdqo/grid.hpp"

namespace tdqo {

// Adaptive Gauss-Kronrod (G7/K15) quadrature plus the principal-value /
// Hadamard-finite-part constructions needed to evaluate every singular
// transform of the library independently of its spectral implementation.

struct QuadResult {
    complexd value{0.0, 0.0};
    double error = 0.0;
    bool converged = true;
};

namespace quad {

// QUADPACK dqk15 nodes and weights.
inline constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

using Integrand = std::function<complexd(double)>;

inline void gk15(const Integrand &f, double a, double b, complexd &valk,
                 double &err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    complexd resg(0.0, 0.0), resk(0.0, 0.0);
    const complexd fc = f(c);
    resk += kWgk[7] * fc;
    resg += kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const complexd f1 = f(c - h * kXgk[i]);
        const complexd f2 = f(c + h * kXgk[i]);
        resk += kWgk[i] * (f1 + f2);
        if (i % 2 == 1) resg += kWg[i / 2] * (f1 + f2);
    }
    valk = resk * h;
    err = std::abs((resk - resg) * h);
}

inline void adapt(const Integrand &f, double a, double b, double tol_abs,
                  int depth, QuadResult &acc) {
    complexd vk;
    double err;
    gk15(f, a, b, vk, err);
    if (err <= tol_abs || depth >= 48) {
        acc.value += vk;
        acc.error += err;
        return;
    }
    const double m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol_abs, depth + 1, acc);
    adapt(f, m, b, 0.5 * tol_abs, depth + 1, acc);
}

// Adaptive integration of f over [a,b], splitting at the supplied interior
// break points (declared discontinuities of the integrand). Convergence is
// judged on the accumulated global error estimate.
inline QuadResult integrate(const Integrand &f, double a, double b,
                            double tol_abs,
                            const std::vector<double> &breaks = {}) {
    QuadResult acc;
    std::vector<double> pts;
    pts.push_back(a);
    for (double x : breaks)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    const double per = tol_abs / static_cast<double>(pts.size() - 1);
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] - pts[i] <= 0.0) continue;
        adapt(f, pts[i], pts[i + 1], per, 0, acc);
    }
    acc.converged = acc.error <= tol_abs;
    return acc;
}

}  // namespace quad

enum class SingularKernel {
    inverse_t,        // p.v. 1/t'
    inv_sqrt,         // 1/sqrt|t'|
    sgn_inv_sqrt,     // sgn(t')/sqrt|t'|
    one_sided_sqrt,   // H(t')/sqrt(t')
    finite_part_32,   // Hadamard f.p. |t'|^{-3/2}
    sgn_32,           // f.p. sgn(t')/|t'|^{3/2}
    chi,              // (1 + i*sgn(t'))/|t'|^{3/2}
};

// Behaviour of fn beyond the integration window: `vanishing` assumes fn
// decays to zero there (the usual case for packets and test pulses),
// `constant` assumes fn(t - t') == fn(t) beyond it.
enum class TailAssumption { vanishing, constant };

namespace detail {

using Fn = std::function<complexd(double)>;

// s-space break points induced by declared jump points of fn. The
// substitution t' = +-s^2 maps a jump of fn at x0 to s = sqrt(|t - x0|) on
// the corresponding side.
inline std::vector<double> s_breaks(double t, const std::vector<double> &jumps,
                                    double smax) {
    std::vector<double> out;
    for (double x0 : jumps) {
        const double u = std::abs(t - x0);
        const double s = std::sqrt(u);
        if (s > 0.0 && s < smax) out.push_back(s);
    }
    return out;
}

inline std::vector<double> u_breaks(double t, const std::vector<double> &jumps,
                                    double umax) {
    std::vector<double> out;
    for (double x0 : jumps) {
        const double u = std::abs(t - x0);
        if (u > 0.0 && u < umax) out.push_back(u);
    }
    return out;
}

}  // namespace detail

// Evaluates integral dt' fn(t - t') * K(t') over t' in [-window, window],
// with the singular core at t' = 0 handled by symmetric pairing, the
// substitution t' = +-s^2, and (for the |t'|^{-3/2} family) the subtraction
// fn(t-t') - fn(t), whose omitted finite-part term is exactly zero.
inline QuadResult pv_quadrature_oracle(
    const std::function<complexd(double)> &fn, SingularKernel kernel, double t,
    double window, double tol = 1e-10,
    const std::vector<double> &jump_points = {},
    TailAssumption tail = TailAssumption::vanishing) {
    if (!(window > 0.0)) throw error("pv_quadrature_oracle: window must be positive");
    const double W = window;
    const double sW = std::sqrt(W);

    switch (kernel) {
        case SingularKernel::inverse_t: {
            auto g = [&](double u) { return fn(t - u) - fn(t + u); };
            return quad::integrate([&](double u) { return g(u) / u; }, 0.0, W,
                                   tol, detail::u_breaks(t, jump_points, W));
        }
        case SingularKernel::inv_sqrt: {
            auto g = [&](double s) {
                const double u = s * s;
                return 2.0 * (fn(t - u) + fn(t + u));
            };
            return quad::integrate(g, 0.0, sW, tol,
                                   detail::s_breaks(t, jump_points, sW));
        }
        case SingularKernel::sgn_inv_sqrt: {
            auto g = [&](double s) {
                const double u = s * s;
                return 2.0 * (fn(t - u) - fn(t + u));
            };
            return quad::integrate(g, 0.0, sW, tol,
                                   detail::s_breaks(t, jump_points, sW));
        }
        case SingularKernel::one_sided_sqrt: {
            auto g = [&](double s) { return 2.0 * fn(t - s * s); };
            return quad::integrate(g, 0.0, sW, tol,
                                   detail::s_breaks(t, jump_points, sW));
        }
        case SingularKernel::finite_part_32: {
            const complexd f0 = fn(t);
            auto g = [&, f0](double s) {
                const double u = s * s;
                return 2.0 * (fn(t - u) + fn(t + u) - 2.0 * f0) / (s * s);
            };
            QuadResult r = quad::integrate(g, 0.0, sW, tol,
                                           detail::s_breaks(t, jump_points, sW));
            if (tail == TailAssumption::vanishing) r.value -= 4.0 * f0 / sW;
            return r;
        }
        case SingularKernel::sgn_32: {
            auto g = [&](double s) {
                const double u = s * s;
                return 2.0 * (fn(t - u) - fn(t + u)) / (s * s);
            };
            return quad::integrate(g, 0.0, sW, tol,
                                   detail::s_breaks(t, jump_points, sW));
        }
        case SingularKernel::chi: {
            QuadResult even = pv_quadrature_oracle(fn, SingularKernel::finite_part_32,
                                                   t, window, tol, jump_points, tail);
            QuadResult odd = pv_quadrature_oracle(fn, SingularKernel::sgn_32, t,
                                                  window, tol, jump_points, tail);
            QuadResult r;
            r.value = even.value + complexd(0.0, 1.0) * odd.value;
            r.error = even.error + odd.error;
            r.converged = even.converged && odd.converged;
            return r;
        }
    }
    throw error("pv_quadrature_oracle: unknown kernel");
}

}  // namespace tdqo
