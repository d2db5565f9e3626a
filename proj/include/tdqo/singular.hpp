#pragma once

#include <functional>

#include "tdqo/fourier.hpp"
#include "tdqo/grid.hpp"

namespace tdqo {

// Spectral multipliers for the singular convolution kernels, under the
// analysis convention e^{+i 2 pi f t}:
//
//   1/t            ->  i*pi*sgn(f)
//   1/sqrt|t|      ->  1/sqrt|f|
//   sgn(t)/sqrt|t| ->  i*sgn(f)/sqrt|f|
//   H(t)/sqrt(t)   ->  (1 + i*sgn(f)) / (2*sqrt|f|)
//
// The f = 0 bin gets multiplier 0 for every kernel (integrable singularity,
// inputs are required to have negligible DC), and sgn := 0 on both the DC and
// Nyquist bins.

enum class HalfOrderKind { even, odd };

namespace detail {

// Applies a per-bin multiplier in the frequency domain. pad_factor >= 2
// embeds the window in a larger circle before transforming; the identities
// asserted by the test-suite hold exactly only in plain circular semantics
// (pad_factor 1), which is the default.
inline Signal apply_multiplier(const Signal &sig,
                               const std::function<complexd(const TimeGrid &, int)> &mult,
                               int pad_factor) {
    sig.check();
    if (pad_factor < 1) throw error("apply_multiplier: pad_factor must be >= 1");
    if (pad_factor == 1) {
        Spectrum sp = forward_fourier(sig);
        for (int k = 0; k < sp.n(); ++k) sp.bins[k] *= mult(sp.grid, k);
        Signal out = inverse_fourier(sp, sig.unit);
        return out;
    }
    TimeGrid padded(sig.grid.n * pad_factor, sig.grid.dt, sig.grid.t0);
    Signal big(padded, sig.unit);
    for (int j = 0; j < sig.n(); ++j) big.samples[j] = sig.samples[j];
    Spectrum sp = forward_fourier(big);
    for (int k = 0; k < sp.n(); ++k) sp.bins[k] *= mult(sp.grid, k);
    Signal conv = inverse_fourier(sp, sig.unit);
    Signal out(sig.grid, sig.unit);
    for (int j = 0; j < sig.n(); ++j) out.samples[j] = conv.samples[j];
    return out;
}

}  // namespace detail

// f_h(t) = p.v. integral dt' f(t-t')/t', the paper's Hilbert transform
// (no 1/pi factor). Spectrally: multiplication by i*pi*sgn(f).
inline Signal hilbert_paper(const Signal &sig, int pad_factor = 1) {
    return detail::apply_multiplier(
        sig,
        [](const TimeGrid &g, int k) {
            return complexd(0.0, pi * g.sgn_f(k));
        },
        pad_factor);
}

// Convolution with 1/sqrt|t| (even) or sgn(t)/sqrt|t| (odd).
inline Signal half_order_convolve(const Signal &sig, HalfOrderKind kind,
                                  int pad_factor = 1) {
    if (kind == HalfOrderKind::even) {
        return detail::apply_multiplier(
            sig,
            [](const TimeGrid &g, int k) {
                if (k == 0) return complexd(0.0, 0.0);
                return complexd(1.0 / std::sqrt(g.abs_f(k)), 0.0);
            },
            pad_factor);
    }
    return detail::apply_multiplier(
        sig,
        [](const TimeGrid &g, int k) {
            const int s = g.sgn_f(k);
            if (s == 0) return complexd(0.0, 0.0);
            return complexd(0.0, s / std::sqrt(g.abs_f(k)));
        },
        pad_factor);
}

// One-sided kernels H(+-t')/sqrt|t'|; sign = +1 integrates over t' > 0.
inline Signal one_sided_sqrt_convolve(const Signal &sig, int sign,
                                      int pad_factor = 1) {
    if (sign != 1 && sign != -1) throw error("one_sided_sqrt_convolve: sign must be +-1");
    return detail::apply_multiplier(
        sig,
        [sign](const TimeGrid &g, int k) {
            if (k == 0) return complexd(0.0, 0.0);
            const double w = 1.0 / (2.0 * std::sqrt(g.abs_f(k)));
            return complexd(w, sign * g.sgn_f(k) * w);
        },
        pad_factor);
}

// Energy fraction carried by the DC bin and the two lowest nonzero
// frequencies; the half-order multipliers are unreliable when this is large.
inline double low_band_energy_fraction(const Signal &sig) {
    Spectrum sp = forward_fourier(sig);
    const int n = sp.n();
    double total = 0.0;
    for (const auto &b : sp.bins) total += std::norm(b);
    if (total == 0.0) return 0.0;
    double low = std::norm(sp.bins[0]) + std::norm(sp.bins[1]) + std::norm(sp.bins[n - 1]);
    return low / total;
}

// The realized discrete kernel of a multiplier (its inverse transform), used
// by the non-causality witness.
inline Signal realized_kernel(const TimeGrid &g,
                              const std::function<complexd(const TimeGrid &, int)> &mult) {
    Spectrum sp(g);
    for (int k = 0; k < g.n; ++k) sp.bins[k] = mult(g, k);
    return inverse_fourier(sp);
}

}  // namespace tdqo
