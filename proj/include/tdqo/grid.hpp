#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdqo {

using complexd = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

class error : public std::runtime_error {
public:
    explicit error(const std::string &what) : std::runtime_error(what) {}
};

// Uniform sampled time axis t_j = t0 + j*dt, j = 0..n-1.
// The conjugate frequency axis is f_k = k*df for k <= n/2 and (k-n)*df above,
// with df = 1/(n*dt) and f_max = 1/(2*dt).
struct TimeGrid {
    int n = 0;
    double dt = 0.0;
    double t0 = 0.0;

    TimeGrid() = default;
    TimeGrid(int n_, double dt_, double t0_ = 0.0) : n(n_), dt(dt_), t0(t0_) {
        if (n < 2 || n % 2 != 0) throw error("TimeGrid: n must be even and >= 2");
        if (!(dt > 0.0)) throw error("TimeGrid: dt must be positive");
    }

    double df() const { return 1.0 / (n * dt); }
    double f_max() const { return 1.0 / (2.0 * dt); }
    double span() const { return n * dt; }

    double t(int j) const { return t0 + j * dt; }

    // Signed frequency of bin k; bins above n/2 are negative frequencies.
    double f(int k) const {
        return (k <= n / 2) ? k * df() : (k - n) * df();
    }
    double abs_f(int k) const { return std::abs(f(k)); }

    // Signum of bin k with sgn := 0 on both the DC and the Nyquist bin.
    int sgn_f(int k) const {
        if (k == 0 || k == n / 2) return 0;
        return (k < n / 2) ? 1 : -1;
    }

    bool operator==(const TimeGrid &o) const {
        return n == o.n && dt == o.dt && t0 == o.t0;
    }
    bool operator!=(const TimeGrid &o) const { return !(*this == o); }
};

enum class Unit {
    dimensionless,
    volts,
    per_sqrt_second,
    volts_squared,
    per_second,
};

// Complex-valued function sampled on a TimeGrid. Units are carried as tags
// only; no conversion is ever applied.
struct Signal {
    TimeGrid grid;
    std::vector<complexd> samples;
    Unit unit = Unit::dimensionless;

    Signal() = default;
    Signal(const TimeGrid &g, Unit u = Unit::dimensionless)
        : grid(g), samples(static_cast<size_t>(g.n), complexd(0.0, 0.0)), unit(u) {}

    int n() const { return grid.n; }

    void check() const {
        if (samples.size() != static_cast<size_t>(grid.n))
            throw error("Signal: sample count does not match grid");
    }
};

// Frequency-domain counterpart; bins k > n/2 hold negative frequencies.
struct Spectrum {
    TimeGrid grid;
    std::vector<complexd> bins;

    Spectrum() = default;
    explicit Spectrum(const TimeGrid &g)
        : grid(g), bins(static_cast<size_t>(g.n), complexd(0.0, 0.0)) {}

    int n() const { return grid.n; }

    void check() const {
        if (bins.size() != static_cast<size_t>(grid.n))
            throw error("Spectrum: bin count does not match grid");
    }
};

struct PhysConsts {
    double Z = 1.0;  // characteristic impedance, ohms
    double h = 1.0;  // Planck constant, joule-seconds

    double hbar() const { return h / (2.0 * pi); }

    static PhysConsts natural() { return PhysConsts{1.0, 1.0}; }
    static PhysConsts si() { return PhysConsts{50.0, 6.62607015e-34}; }

    void check() const {
        if (!(Z > 0.0) || !(h > 0.0)) throw error("PhysConsts: Z and h must be positive");
    }
};

inline double sup_norm(const Signal &s) {
    double m = 0.0;
    for (const auto &v : s.samples) m = std::max(m, std::abs(v));
    return m;
}

inline double max_imag(const Signal &s) {
    double m = 0.0;
    for (const auto &v : s.samples) m = std::max(m, std::abs(v.imag()));
    return m;
}

// A Signal tagged real-valued must have imaginary parts <= 1e-12 of its
// sup-norm.
inline bool is_effectively_real(const Signal &s, double rel_tol = 1e-12) {
    const double m = sup_norm(s);
    if (m == 0.0) return true;
    return max_imag(s) <= rel_tol * m;
}

// Mean of the samples relative to sup-norm; diagnostic for the zero-DC
// precondition of the singular-kernel transforms.
inline double dc_fraction(const Signal &s) {
    complexd acc(0.0, 0.0);
    for (const auto &v : s.samples) acc += v;
    acc /= static_cast<double>(s.n());
    const double m = sup_norm(s);
    if (m == 0.0) return 0.0;
    return std::abs(acc) / m;
}

inline double energy(const Signal &s) {
    double acc = 0.0;
    for (const auto &v : s.samples) acc += std::norm(v);
    return acc * s.grid.dt;
}

inline double energy(const Spectrum &sp) {
    double acc = 0.0;
    for (const auto &v : sp.bins) acc += std::norm(v);
    return acc * sp.grid.df();
}

inline Signal real_part(const Signal &s) {
    Signal out(s.grid, s.unit);
    for (int j = 0; j < s.n(); ++j) out.samples[j] = complexd(s.samples[j].real(), 0.0);
    return out;
}

inline Signal operator*(double a, const Signal &s) {
    Signal out = s;
    for (auto &v : out.samples) v *= a;
    return out;
}

inline Signal operator+(const Signal &a, const Signal &b) {
    if (a.grid != b.grid) throw error("Signal+: grid mismatch");
    Signal out = a;
    for (int j = 0; j < a.n(); ++j) out.samples[j] += b.samples[j];
    return out;
}

inline Signal operator-(const Signal &a, const Signal &b) {
    if (a.grid != b.grid) throw error("Signal-: grid mismatch");
    Signal out = a;
    for (int j = 0; j < a.n(); ++j) out.samples[j] -= b.samples[j];
    return out;
}

}  // namespace tdqo
