#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tdqo/singular.hpp"

namespace tdqo {

// Classical-trace conversion layer between voltage and the time-domain
// quadratures
//   p(t) = integral dt' sqrt(2/(Zh|t'|)) v(t-t'),
//   q(t) = integral dt' sqrt(2/(Zh|t'|)) sgn(t') v(t-t'),
// the generalized quadratures q_theta = cos(theta) q + sin(theta) p, the
// one-sided s+- transforms, and the instantaneous photon flux
// n(t) = [q^2 + p^2]/2.

struct QuadraturePair {
    Signal p;
    Signal q;
    PhysConsts consts;
    std::vector<std::uint8_t> valid;  // edge mask, outer 10% per side excluded

    int n() const { return p.n(); }
};

struct FluxTrace {
    Signal n;  // photons per second
    std::vector<std::uint8_t> valid;
};

namespace detail {

inline std::vector<std::uint8_t> edge_mask(int n) {
    std::vector<std::uint8_t> m(static_cast<size_t>(n), 1);
    const int cut = n / 10;
    for (int j = 0; j < cut; ++j) m[j] = 0;
    for (int j = n - cut; j < n; ++j) m[j] = 0;
    return m;
}

}  // namespace detail

inline QuadraturePair quadratures_from_voltage(const Signal &v,
                                               const PhysConsts &consts,
                                               int pad_factor = 1) {
    consts.check();
    const double scale = std::sqrt(2.0 / (consts.Z * consts.h));
    QuadraturePair out;
    out.p = scale * half_order_convolve(v, HalfOrderKind::even, pad_factor);
    out.q = scale * half_order_convolve(v, HalfOrderKind::odd, pad_factor);
    out.p.unit = Unit::dimensionless;
    out.q.unit = Unit::dimensionless;
    out.consts = consts;
    out.valid = detail::edge_mask(v.n());
    return out;
}

// s+-(t) = integral over t' >< 0 of v(t-t')/sqrt|t'|, via the multiplier pair
// (1 +- i sgn f)/(2 sqrt|f|). Exact linear identities on the same circle:
// s+ + s- = sqrt(Zh/2) * q_{pi/2}-trace and s+ - s- = sqrt(Zh/2) * q_0-trace.
inline std::pair<Signal, Signal> s_transforms(const Signal &v,
                                              const PhysConsts &consts,
                                              int pad_factor = 1) {
    consts.check();
    Signal sp = one_sided_sqrt_convolve(v, +1, pad_factor);
    Signal sm = one_sided_sqrt_convolve(v, -1, pad_factor);
    return {sp, sm};
}

// q_theta = cos(theta) q + sin(theta) p; exact pass-through at 0 and pi/2.
inline Signal general_quadrature(const QuadraturePair &pair, double theta) {
    if (theta == 0.0) return pair.q;
    if (theta == pi / 2.0) return pair.p;
    Signal out(pair.p.grid);
    const double c = std::cos(theta), s = std::sin(theta);
    for (int j = 0; j < out.n(); ++j)
        out.samples[j] = c * pair.q.samples[j] + s * pair.p.samples[j];
    return out;
}

inline FluxTrace photon_flux(const QuadraturePair &pair) {
    FluxTrace out;
    out.n = Signal(pair.p.grid, Unit::per_second);
    for (int j = 0; j < pair.n(); ++j) {
        const double qq = pair.q.samples[j].real();
        const double pp = pair.p.samples[j].real();
        out.n.samples[j] = complexd(0.5 * (qq * qq + pp * pp), 0.0);
    }
    out.valid = pair.valid;
    return out;
}

// Inverse of quadratures_from_voltage as a per-bin pseudo-inverse of its
// multipliers; the DC bin carries nothing and stays zero, the Nyquist bin is
// recovered from p alone (its q response is zero by the sgn convention).
inline Signal voltage_from_quadratures(const QuadraturePair &pair,
                                       int pad_factor = 1) {
    const PhysConsts &consts = pair.consts;
    consts.check();
    const double scale = std::sqrt(consts.Z * consts.h / 2.0);

    Spectrum sp_p, sp_q;
    if (pad_factor == 1) {
        sp_p = forward_fourier(pair.p);
        sp_q = forward_fourier(pair.q);
    } else {
        TimeGrid padded(pair.p.grid.n * pad_factor, pair.p.grid.dt, pair.p.grid.t0);
        Signal bp(padded), bq(padded);
        for (int j = 0; j < pair.n(); ++j) {
            bp.samples[j] = pair.p.samples[j];
            bq.samples[j] = pair.q.samples[j];
        }
        sp_p = forward_fourier(bp);
        sp_q = forward_fourier(bq);
    }

    Spectrum sv(sp_p.grid);
    const int n = sv.n();
    for (int k = 0; k < n; ++k) {
        if (k == 0) continue;
        const double root = std::sqrt(sv.grid.abs_f(k));
        const int s = sv.grid.sgn_f(k);
        if (s == 0) {
            sv.bins[k] = scale * root * sp_p.bins[k];
        } else {
            const complexd msgn(0.0, -static_cast<double>(s));
            sv.bins[k] = scale * root * 0.5 * (sp_p.bins[k] + msgn * sp_q.bins[k]);
        }
    }
    Signal v = inverse_fourier(sv, Unit::volts);
    if (pad_factor == 1) return v;
    Signal out(pair.p.grid, Unit::volts);
    for (int j = 0; j < out.n(); ++j) out.samples[j] = v.samples[j];
    return out;
}

// Calibrated sign s in the pair property q = s * (1/pi) * hilbert_paper(p),
// measured once on a monochromatic trace.
inline int hilbert_pair_sign() {
    static const int sign = [] {
        TimeGrid g(256, 0.01, 0.0);
        Signal v(g, Unit::volts);
        const double f0 = 8.0 * g.df();
        for (int j = 0; j < g.n; ++j)
            v.samples[j] = complexd(std::cos(2.0 * pi * f0 * g.t(j)), 0.0);
        QuadraturePair pr = quadratures_from_voltage(v, PhysConsts::natural());
        Signal h = (1.0 / pi) * hilbert_paper(pr.p);
        double dot = 0.0;
        for (int j = 0; j < g.n; ++j)
            dot += pr.q.samples[j].real() * h.samples[j].real();
        return dot >= 0.0 ? 1 : -1;
    }();
    return sign;
}

// Envelope of the analytic signal v + i (1/pi) hilbert_paper(v); independent
// oracle for where a pulse's flux should peak.
inline Signal analytic_envelope(const Signal &v) {
    Signal h = (1.0 / pi) * hilbert_paper(v);
    Signal out(v.grid);
    for (int j = 0; j < v.n(); ++j) {
        const double re = v.samples[j].real();
        const double im = h.samples[j].real();
        out.samples[j] = complexd(std::hypot(re, im), 0.0);
    }
    return out;
}

// l1 mass fraction of the v -> p kernel at t' < 0 (the transforms need
// future amplitudes; the witness asserts this is >= 25%).
inline double negative_time_kernel_fraction(const TimeGrid &g) {
    TimeGrid g0(g.n, g.dt, 0.0);
    Signal k = realized_kernel(g0, [](const TimeGrid &gg, int kk) {
        if (kk == 0) return complexd(0.0, 0.0);
        return complexd(1.0 / std::sqrt(gg.abs_f(kk)), 0.0);
    });
    double total = 0.0, negative = 0.0;
    for (int j = 0; j < g0.n; ++j) {
        const double a = std::abs(k.samples[j]);
        total += a;
        if (j > g0.n / 2) negative += a;  // wrapped indices are t' < 0
    }
    return negative / total;
}

}  // namespace tdqo
