#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "tdqo/fourier.hpp"
#include "tdqo/grid.hpp"

namespace tdqo {

// Photon-packet amplitude shapes. The exponential decay is
// phi(t) = Theta(t) e^{-t/(2 sigma_t)} / sqrt(sigma_t); the Gaussian is
// phi(t) = (2 pi sigma^2)^{-1/4} e^{-t^2/(4 sigma^2)} e^{-i 2 pi f0 t}, so
// |phi|^2 has standard deviation sigma and the spectrum peaks at +f0.
struct PacketShape {
    enum class Kind { exponential_decay, gaussian, custom };

    Kind kind = Kind::gaussian;
    double sigma = 1.0;
    double carrier_f0 = 0.0;                   // gaussian only
    std::vector<complexd> custom_samples;      // custom only

    static PacketShape exponential(double sigma_t) {
        if (!(sigma_t > 0.0)) throw error("PacketShape: sigma_t must be positive");
        PacketShape s;
        s.kind = Kind::exponential_decay;
        s.sigma = sigma_t;
        return s;
    }
    static PacketShape gaussian_carrier(double sigma, double f0 = 0.0) {
        if (!(sigma > 0.0)) throw error("PacketShape: sigma must be positive");
        PacketShape s;
        s.kind = Kind::gaussian;
        s.sigma = sigma;
        s.carrier_f0 = f0;
        return s;
    }
    static PacketShape custom(std::vector<complexd> samples) {
        PacketShape s;
        s.kind = Kind::custom;
        s.custom_samples = std::move(samples);
        return s;
    }

    // Points where phi is discontinuous, consumed by the adaptive quadrature.
    std::vector<double> jump_points() const {
        if (kind == Kind::exponential_decay) return {0.0};
        return {};
    }

    // Radius beyond which phi is negligible (< ~1e-16 of peak).
    double decay_radius() const {
        switch (kind) {
            case Kind::exponential_decay: return 80.0 * sigma;
            case Kind::gaussian: return 14.0 * sigma;
            case Kind::custom: return 0.0;  // caller must rely on the grid
        }
        return 0.0;
    }
};

// Normalized packet mode A = integral dt phi*(t) a(t); phi lives on the grid
// in its own frame (peaked near t = 0), tau is the emission offset.
struct PhotonPacket {
    Signal phi;            // unit: per-sqrt-second
    double tau = 0.0;
    PacketShape shape;
    double renorm_factor = 1.0;  // factor divided out to reach unit norm

    const TimeGrid &grid() const { return phi.grid; }
};

namespace detail {

inline complexd shape_value(const PacketShape &s, double t) {
    switch (s.kind) {
        case PacketShape::Kind::exponential_decay:
            if (t < 0.0) return complexd(0.0, 0.0);
            return complexd(std::exp(-t / (2.0 * s.sigma)) / std::sqrt(s.sigma), 0.0);
        case PacketShape::Kind::gaussian: {
            const double amp = std::pow(2.0 * pi * s.sigma * s.sigma, -0.25) *
                               std::exp(-t * t / (4.0 * s.sigma * s.sigma));
            const double ph = -2.0 * pi * s.carrier_f0 * t;
            return amp * complexd(std::cos(ph), std::sin(ph));
        }
        case PacketShape::Kind::custom:
            throw error("shape_value: custom shapes are sample-defined");
    }
    return complexd(0.0, 0.0);
}

}  // namespace detail

inline PhotonPacket make_packet(const PacketShape &shape, const TimeGrid &grid,
                                double tau = 0.0) {
    PhotonPacket p;
    p.phi = Signal(grid, Unit::per_sqrt_second);
    p.tau = tau;
    p.shape = shape;

    if (shape.kind == PacketShape::Kind::custom) {
        if (shape.custom_samples.size() != static_cast<size_t>(grid.n))
            throw error("make_packet: custom sample count does not match grid");
        p.phi.samples = shape.custom_samples;
    } else {
        for (int j = 0; j < grid.n; ++j)
            p.phi.samples[j] = detail::shape_value(shape, grid.t(j));
    }

    const double nrm2 = energy(p.phi);
    if (!(nrm2 > 0.0)) throw error("make_packet: shape has zero norm on this grid");
    const double factor = std::sqrt(nrm2);
    for (auto &v : p.phi.samples) v /= factor;
    p.renorm_factor = factor;

    const double peak = sup_norm(p.phi);
    const double edge = std::max(std::abs(p.phi.samples.front()),
                                 std::abs(p.phi.samples.back()));
    if (edge > 1e-8 * peak)
        throw error("make_packet: packet does not decay below 1e-8 of peak at the grid edges");
    return p;
}

// Fraction of the packet's spectral weight at f > 0 (Nyquist counted as
// positive). The paper's idealization treats this as exactly 1.
inline double positive_frequency_weight(const PhotonPacket &p) {
    Spectrum sp = forward_fourier(p.phi);
    const int n = sp.n();
    double pos = 0.0, total = 0.0;
    for (int k = 0; k < n; ++k) {
        const double m = std::norm(sp.bins[k]);
        total += m;
        if (k >= 1 && k <= n / 2) pos += m;
    }
    if (total == 0.0) return 0.0;
    return pos / total;
}

// Band-limited mode: drop the f <= 0 content, renormalize, and report the
// discarded weight.
inline std::pair<PhotonPacket, double> project_positive_frequencies(const PhotonPacket &p) {
    Spectrum sp = forward_fourier(p.phi);
    const int n = sp.n();
    for (int k = 0; k < n; ++k)
        if (k == 0 || k > n / 2) sp.bins[k] = complexd(0.0, 0.0);
    PhotonPacket out = p;
    out.phi = inverse_fourier(sp, Unit::per_sqrt_second);
    const double kept = energy(out.phi);
    const double discarded = 1.0 - kept;
    const double factor = std::sqrt(kept);
    for (auto &v : out.phi.samples) v /= factor;
    out.renorm_factor = p.renorm_factor * factor;
    // The projected packet is band-limited and smooth; its analytic shape
    // (and any jump) no longer applies.
    out.shape = PacketShape::custom(out.phi.samples);
    return {out, discarded};
}

// Time centroid and spread of |phi|^2 in the packet frame.
inline double packet_centroid(const PhotonPacket &p) {
    double acc = 0.0;
    for (int j = 0; j < p.phi.n(); ++j)
        acc += p.grid().t(j) * std::norm(p.phi.samples[j]);
    return acc * p.grid().dt;
}

inline double packet_spread(const PhotonPacket &p) {
    const double c = packet_centroid(p);
    double acc = 0.0;
    for (int j = 0; j < p.phi.n(); ++j) {
        const double d = p.grid().t(j);
        acc += d * d * std::norm(p.phi.samples[j]);
    }
    const double m2 = acc * p.grid().dt;
    return std::sqrt(std::max(0.0, m2 - c * c));
}

// phi as a function usable by the quadrature oracle: analytic for the
// built-in shapes (same normalization the sampled packet carries, up to the
// O(dt^2) renormalization), linear interpolation for custom samples.
inline std::function<complexd(double)> phi_function(const PhotonPacket &p) {
    if (p.shape.kind != PacketShape::Kind::custom) {
        const PacketShape shape = p.shape;
        return [shape](double t) { return detail::shape_value(shape, t); };
    }
    const Signal phi = p.phi;
    return [phi](double t) -> complexd {
        const TimeGrid &g = phi.grid;
        const double x = (t - g.t0) / g.dt;
        if (x <= 0.0 || x >= g.n - 1) return complexd(0.0, 0.0);
        const int j = static_cast<int>(x);
        const double w = x - j;
        return (1.0 - w) * phi.samples[j] + w * phi.samples[j + 1];
    };
}

}  // namespace tdqo
