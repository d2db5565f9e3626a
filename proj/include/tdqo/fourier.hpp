#pragma once

#include <fftw3.h>

#include <mutex>
#include <vector>

#include "tdqo/grid.hpp"

namespace tdqo {

namespace detail {

// FFTW's planner is not thread-safe; execution of independent plans is.
inline std::mutex &fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// Unnormalized DFT core, sign = +1 for e^{+2*pi*i*jk/n}, -1 for the reverse.
// FFTW_ESTIMATE keeps plans deterministic across runs.
inline void dft_core(std::vector<complexd> &data, int sign) {
    const int n = static_cast<int>(data.size());
    fftw_complex *buf = reinterpret_cast<fftw_complex *>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lk(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(n, buf, buf,
                                sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lk(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
}

}  // namespace detail

// Analysis transform, x~(f) = integral dt x(t) e^{+i 2 pi f t}, discretized as
// x~(f_k) = dt * sum_j x(t_j) e^{+i 2 pi f_k t_j}. The t0 offset enters as a
// per-bin phase on the signed frequency axis.
inline Spectrum forward_fourier(const Signal &sig) {
    sig.check();
    const TimeGrid &g = sig.grid;
    Spectrum out(g);
    out.bins = sig.samples;
    detail::dft_core(out.bins, +1);
    for (int k = 0; k < g.n; ++k) {
        const double ph = 2.0 * pi * g.f(k) * g.t0;
        out.bins[k] *= g.dt * complexd(std::cos(ph), std::sin(ph));
    }
    return out;
}

// Synthesis transform, x(t_j) = df * sum_k x~(f_k) e^{-i 2 pi f_k t_j}.
inline Signal inverse_fourier(const Spectrum &spec, Unit unit = Unit::dimensionless) {
    spec.check();
    const TimeGrid &g = spec.grid;
    Signal out(g, unit);
    out.samples = spec.bins;
    for (int k = 0; k < g.n; ++k) {
        const double ph = -2.0 * pi * g.f(k) * g.t0;
        out.samples[k] *= complexd(std::cos(ph), std::sin(ph));
    }
    detail::dft_core(out.samples, -1);
    const double df = g.df();
    for (auto &v : out.samples) v *= df;
    return out;
}

// Hermitian-symmetry defect of the spectrum of a real signal,
// max_k |X[n-k] - conj(X[k])| relative to the largest bin.
inline double hermitian_defect(const Spectrum &sp) {
    const int n = sp.n();
    double scale = 0.0;
    for (const auto &b : sp.bins) scale = std::max(scale, std::abs(b));
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (int k = 1; k <= n / 2; ++k) {
        const complexd d = sp.bins[(n - k) % n] - std::conj(sp.bins[k]);
        worst = std::max(worst, std::abs(d));
    }
    return worst / scale;
}

// Parseval defect |dt*sum|x|^2 - df*sum|X|^2| / (dt*sum|x|^2).
inline double parseval_defect(const Signal &sig, const Spectrum &sp) {
    const double et = energy(sig);
    const double ef = energy(sp);
    if (et == 0.0) return std::abs(ef);
    return std::abs(et - ef) / et;
}

}  // namespace tdqo
