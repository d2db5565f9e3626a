#pragma once

#include <optional>
#include <string>

#include "tdqo/chi.hpp"
#include "tdqo/grid.hpp"
#include "tdqo/packet.hpp"

namespace tdqo {

// Photonic states built on a packet mode: vacuum, |N>_A, or coherent
// |alpha>_A.
struct StateSpec {
    enum class Kind { vacuum, fock, coherent };

    Kind kind = Kind::vacuum;
    int fock_n = 1;
    complexd alpha{0.0, 0.0};

    static StateSpec vacuum() { return StateSpec{}; }
    static StateSpec fock(int n) {
        if (n < 1) throw error("StateSpec: Fock N must be >= 1");
        StateSpec s;
        s.kind = Kind::fock;
        s.fock_n = n;
        return s;
    }
    static StateSpec coherent(complexd a) {
        StateSpec s;
        s.kind = Kind::coherent;
        s.alpha = a;
        return s;
    }

    // Normal-ordered mean photon number.
    double mean_n() const {
        switch (kind) {
            case Kind::vacuum: return 0.0;
            case Kind::fock: return static_cast<double>(fock_n);
            case Kind::coherent: return std::norm(alpha);
        }
        return 0.0;
    }
};

// Which chi/psi evaluation backs the moment formulas. auto_select uses the
// exact closed form for exponential packets and the spectral engine
// otherwise.
enum class ChiEngine { auto_select, spectral, closed_form };

namespace detail {

// psi(t_j - tau) on the packet's grid.
inline Signal psi_shifted(const PhotonPacket &p, PacketMode mode, ChiEngine engine) {
    ChiEngine eng = engine;
    if (eng == ChiEngine::auto_select)
        eng = (p.shape.kind == PacketShape::Kind::exponential_decay &&
               mode == PacketMode::idealized)
                  ? ChiEngine::closed_form
                  : ChiEngine::spectral;
    if (eng == ChiEngine::closed_form) {
        if (p.shape.kind != PacketShape::Kind::exponential_decay)
            throw error("closed-form chi engine requires the exponential shape");
        Signal psi(p.grid());
        for (int j = 0; j < p.grid().n; ++j) {
            const double x = p.grid().t(j) - p.tau;
            if (x == 0.0) {
                // non-removable |t|^{-1/2} singularity; never sampled on the
                // recommended half-offset grids
                psi.samples[j] = complexd(0.0, 0.0);
                continue;
            }
            // psi = -chi/(8 pi) for the defining convolution
            psi.samples[j] = -chi_closed_form_exponential(p.shape.sigma, x) / (8.0 * pi);
        }
        return psi;
    }
    PhotonPacket pk = p;
    double discarded = 0.0;
    if (mode == PacketMode::band_limited) {
        auto [proj, d] = project_positive_frequencies(p);
        pk = proj;
        discarded = d;
        (void)discarded;
    }
    return psi_spectral(pk, p.tau).psi;
}

}  // namespace detail

// <alpha| v(t) |alpha> = 2 sqrt(Zh/2) Im[alpha psi(t - tau)], which is the
// supplement's (1/4 pi) sqrt(Zh/2) Im[alpha chi*(t-tau)] under the
// voltage-kernel convention chi* = 8 pi psi. Vacuum and Fock states return
// the identically-zero signal by code path.
inline Signal mean_voltage(const StateSpec &state, const PhotonPacket &p,
                           const PhysConsts &consts,
                           PacketMode mode = PacketMode::idealized,
                           ChiEngine engine = ChiEngine::auto_select) {
    consts.check();
    Signal out(p.grid(), Unit::volts);
    if (state.kind != StateSpec::Kind::coherent) return out;
    const Signal psi = detail::psi_shifted(p, mode, engine);
    const double pref = 2.0 * std::sqrt(consts.Z * consts.h / 2.0);
    for (int j = 0; j < out.n(); ++j) {
        const complexd w = state.alpha * psi.samples[j];
        out.samples[j] = complexd(pref * w.imag(), 0.0);
    }
    return out;
}

// Vacuum-subtracted <v(t1) v(t2)>. Fock: (Zh N / 64 pi^2) Re[chi_1 chi_2*]
// = Zh N Re[psi_1 psi_2*]; coherent: the product of the mean traces.
inline Signal variance_trace(const StateSpec &state, const PhotonPacket &p,
                             const PhysConsts &consts,
                             PacketMode mode = PacketMode::idealized,
                             ChiEngine engine = ChiEngine::auto_select) {
    consts.check();
    Signal out(p.grid(), Unit::volts_squared);
    if (state.kind == StateSpec::Kind::vacuum) return out;
    if (state.kind == StateSpec::Kind::fock) {
        const Signal psi = detail::psi_shifted(p, mode, engine);
        const double pref = consts.Z * consts.h * static_cast<double>(state.fock_n);
        for (int j = 0; j < out.n(); ++j)
            out.samples[j] = complexd(pref * std::norm(psi.samples[j]), 0.0);
        return out;
    }
    const Signal mean = mean_voltage(state, p, consts, mode, engine);
    for (int j = 0; j < out.n(); ++j) {
        const double m = mean.samples[j].real();
        out.samples[j] = complexd(m * m, 0.0);
    }
    return out;
}

// Vacuum-subtracted two-time covariance at arbitrary times (closed-form
// engine; exponential packets only unless both times lie on the grid).
inline double voltage_covariance(const StateSpec &state, const PhotonPacket &p,
                                 double t1, double t2, const PhysConsts &consts,
                                 PacketMode mode = PacketMode::idealized,
                                 ChiEngine engine = ChiEngine::auto_select) {
    consts.check();
    if (state.kind == StateSpec::Kind::vacuum) return 0.0;
    auto psi_at = [&](double t) -> complexd {
        ChiEngine eng = engine;
        if (eng == ChiEngine::auto_select)
            eng = (p.shape.kind == PacketShape::Kind::exponential_decay &&
                   mode == PacketMode::idealized)
                      ? ChiEngine::closed_form
                      : ChiEngine::spectral;
        if (eng == ChiEngine::closed_form)
            return -chi_closed_form_exponential(p.shape.sigma, t - p.tau) / (8.0 * pi);
        const Signal psi = detail::psi_shifted(p, mode, ChiEngine::spectral);
        const TimeGrid &g = p.grid();
        const int j = static_cast<int>(std::lround((t - g.t0) / g.dt));
        if (j < 0 || j >= g.n) throw error("voltage_covariance: time off the grid");
        return psi.samples[j];
    };
    if (state.kind == StateSpec::Kind::fock) {
        const complexd a = psi_at(t1), b = psi_at(t2);
        return consts.Z * consts.h * state.fock_n * (a * std::conj(b)).real();
    }
    const double pref = 2.0 * std::sqrt(consts.Z * consts.h / 2.0);
    const double m1 = pref * (state.alpha * psi_at(t1)).imag();
    const double m2 = pref * (state.alpha * psi_at(t2)).imag();
    return m1 * m2;
}

// Band-limited vacuum covariance (Zh/2) Re integral_0^F f e^{-i 2 pi f d} df.
// Diverges as F -> infinity; F is the grid's Nyquist frequency.
inline double vacuum_covariance(double f_max, double delta_t, const PhysConsts &consts) {
    consts.check();
    const double F = f_max;
    if (delta_t == 0.0) return 0.5 * consts.Z * consts.h * F * F / 2.0;
    const double a = 2.0 * pi * delta_t;
    const double re = F * std::sin(a * F) / a + (std::cos(a * F) - 1.0) / (a * a);
    return 0.5 * consts.Z * consts.h * re;
}

inline double vacuum_covariance(const TimeGrid &g, double delta_t, const PhysConsts &consts) {
    return vacuum_covariance(g.f_max(), delta_t, consts);
}

struct MomentMetadata {
    PacketMode mode = PacketMode::idealized;
    ChiEngine engine = ChiEngine::auto_select;
    double positive_frequency_weight = 1.0;
    double discarded_weight = 0.0;
    double f_max = 0.0;
    double Z = 1.0;
    double h = 1.0;
    std::string version;
};

struct MomentReport {
    TimeGrid grid;
    Signal mean_v;             // volts
    Signal var_v_subtracted;   // volts^2, vacuum-subtracted
    Signal vac_var;            // volts^2, band-limited vacuum baseline
    MomentMetadata metadata;
};

inline MomentReport moment_report(const StateSpec &state, const PhotonPacket &p,
                                  const PhysConsts &consts,
                                  PacketMode mode = PacketMode::idealized,
                                  ChiEngine engine = ChiEngine::auto_select) {
    MomentReport r;
    r.grid = p.grid();
    r.mean_v = mean_voltage(state, p, consts, mode, engine);
    r.var_v_subtracted = variance_trace(state, p, consts, mode, engine);
    r.vac_var = Signal(p.grid(), Unit::volts_squared);
    const double v0 = vacuum_covariance(p.grid(), 0.0, consts);
    for (auto &s : r.vac_var.samples) s = complexd(v0, 0.0);
    r.metadata.mode = mode;
    r.metadata.engine = engine;
    r.metadata.positive_frequency_weight = positive_frequency_weight(p);
    if (mode == PacketMode::band_limited)
        r.metadata.discarded_weight = 1.0 - r.metadata.positive_frequency_weight;
    r.metadata.f_max = p.grid().f_max();
    r.metadata.Z = consts.Z;
    r.metadata.h = consts.h;
    return r;
}

// Normal-ordered, vacuum-subtracted energy <H> - E_vac
// = <N> h integral_{f>0} f |phi~(f)|^2 df, band-limited at the grid Nyquist.
// The d<H>/d(ln f_max) sensitivity flags log-divergent shapes.
struct EnergyReport {
    double value = 0.0;            // joules
    double dlog_fmax_sensitivity = 0.0;
    bool log_divergent = false;
    double f_max = 0.0;
};

inline EnergyReport energy_mean(const StateSpec &state, const PhotonPacket &p,
                                const PhysConsts &consts) {
    consts.check();
    EnergyReport r;
    r.f_max = p.grid().f_max();
    const double n_mean = state.mean_n();
    if (n_mean == 0.0) return r;
    Spectrum sp = forward_fourier(p.phi);
    const int n = sp.n();
    const double df = sp.grid.df();
    double acc = 0.0;
    for (int k = 1; k <= n / 2; ++k) acc += sp.grid.f(k) * std::norm(sp.bins[k]);
    r.value = n_mean * consts.h * acc * df;
    // F^2 |phi~(F)|^2, averaged over the top few bins
    double edge = 0.0;
    const int navg = 4;
    for (int k = n / 2 - navg + 1; k <= n / 2; ++k) edge += std::norm(sp.bins[k]);
    edge /= navg;
    r.dlog_fmax_sensitivity = n_mean * consts.h * r.f_max * r.f_max * edge;
    r.log_divergent = (r.dlog_fmax_sensitivity > 1e-3 * std::abs(r.value));
    return r;
}

struct ArrivalReport {
    double mean_arrival = 0.0;       // tau + packet centroid, seconds
    double intra_pulse_spread = 0.0; // seconds
    double theta_mean = 0.0;         // normal-ordered <theta>
    double n_mean = 0.0;
    std::optional<double> theta_variance;  // matrix oracle only
    std::string theta_variance_provenance;
};

inline ArrivalReport arrival_stats(const StateSpec &state, const PhotonPacket &p) {
    ArrivalReport r;
    const double centroid = packet_centroid(p);
    r.mean_arrival = p.tau + centroid;
    r.intra_pulse_spread = packet_spread(p);
    r.n_mean = state.mean_n();
    r.theta_mean = r.n_mean * r.mean_arrival;
    return r;
}

}  // namespace tdqo
