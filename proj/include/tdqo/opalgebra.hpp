#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>
#include <vector>

#include "tdqo/packet.hpp"
#include "tdqo/states.hpp"

namespace tdqo {

using SparseC = Eigen::SparseMatrix<complexd>;
using VectorC = Eigen::VectorXcd;
using MatrixC = Eigen::MatrixXcd;

// Frequency-binned bosonic modes with per-mode occupation cutoff n_max.
// Bin frequencies are half-offset, f_k = (k + 1/2) delta_f, so no f = 0 mode
// exists; the conjugate time grid spans 1/delta_f with dt = 1/(M delta_f).
// Truncation makes [b, b+] = I - (n_max+1) P_top exactly; every commutator
// identity is therefore checked on the occupation <= n_max - 1 subspace.
struct ModeSystem {
    int M = 0;
    int n_max = 0;
    double delta_f = 0.0;
    int dim = 0;
    std::vector<int> stride;
    std::vector<SparseC> b;          // annihilation, one per mode
    std::vector<char> safe;          // basis states with all occupations <= n_max-1

    double f(int k) const { return (k + 0.5) * delta_f; }
    double dt() const { return 1.0 / (M * delta_f); }
    double t(int j) const { return j * dt(); }

    int occupation(int basis, int mode) const {
        return (basis / stride[mode]) % (n_max + 1);
    }

    SparseC bdag(int k) const { return SparseC(b[k].adjoint()); }

    // a(f_k) = b_k / sqrt(delta_f)
    SparseC a_f(int k) const { return SparseC(b[k] / std::sqrt(delta_f)); }

    // Directional localized mode at position-time tau, real time `time`:
    // a_{tau,sigma}(t) = sqrt(delta_f) sum_k b_k e^{-i 2 pi f_k (t - sigma tau)}
    SparseC a_t(double time, double tau = 0.0, int sigma = 1) const {
        SparseC acc(dim, dim);
        for (int k = 0; k < M; ++k) {
            const double ph = -2.0 * pi * f(k) * (time - sigma * tau);
            acc = acc + SparseC(complexd(std::cos(ph), std::sin(ph)) * b[k]);
        }
        return SparseC(std::sqrt(delta_f) * acc);
    }

    VectorC vacuum() const {
        VectorC v = VectorC::Zero(dim);
        v(0) = complexd(1.0, 0.0);
        return v;
    }

    // A+ = sum_k c_k b+_k for a spectral profile c.
    SparseC creation_form(const VectorC &c) const {
        SparseC acc(dim, dim);
        for (int k = 0; k < M; ++k) acc = acc + SparseC(c(k) * bdag(k));
        return acc;
    }
};

inline ModeSystem build_mode_system(int M, int n_max, double delta_f) {
    if (M < 1 || n_max < 1) throw error("build_mode_system: M and n_max must be >= 1");
    if (!(delta_f > 0.0)) throw error("build_mode_system: delta_f must be positive");
    double dims = std::pow(static_cast<double>(n_max + 1), M);
    if (dims > 4096.0) throw error("build_mode_system: (n_max+1)^M exceeds the 4096 guard");

    ModeSystem sys;
    sys.M = M;
    sys.n_max = n_max;
    sys.delta_f = delta_f;
    sys.dim = static_cast<int>(dims + 0.5);
    sys.stride.resize(M);
    int s = 1;
    for (int k = 0; k < M; ++k) {
        sys.stride[k] = s;
        s *= (n_max + 1);
    }
    sys.b.reserve(M);
    for (int k = 0; k < M; ++k) {
        std::vector<Eigen::Triplet<complexd>> trip;
        for (int i = 0; i < sys.dim; ++i) {
            const int n = sys.occupation(i, k);
            if (n > 0)
                trip.emplace_back(i - sys.stride[k], i, complexd(std::sqrt(double(n)), 0.0));
        }
        SparseC m(sys.dim, sys.dim);
        m.setFromTriplets(trip.begin(), trip.end());
        sys.b.push_back(std::move(m));
    }
    sys.safe.resize(sys.dim, 1);
    for (int i = 0; i < sys.dim; ++i)
        for (int k = 0; k < M; ++k)
            if (sys.occupation(i, k) > n_max - 1) {
                sys.safe[i] = 0;
                break;
            }
    return sys;
}

// Band-limited kernel replacing the continuum delta:
// D(d) = delta_f sum_k e^{-i 2 pi f_k d}.
inline complexd band_kernel(const ModeSystem &sys, double d) {
    complexd acc(0.0, 0.0);
    for (int k = 0; k < sys.M; ++k) {
        const double ph = -2.0 * pi * sys.f(k) * d;
        acc += complexd(std::cos(ph), std::sin(ph));
    }
    return sys.delta_f * acc;
}

// Same kernel as a closed-form geometric sum (independent route for tests).
inline complexd band_kernel_closed(const ModeSystem &sys, double d) {
    const double x = pi * sys.delta_f * d;
    if (std::abs(std::sin(x)) < 1e-300) return complexd(sys.M * sys.delta_f, 0.0);
    const double mag = std::sin(sys.M * x) / std::sin(x);
    const double ph = -x * sys.M;  // e^{-i pi delta_f d M} phase from the half offset
    return sys.delta_f * mag * complexd(std::cos(ph), std::sin(ph));
}

inline SparseC commutator(const SparseC &A, const SparseC &B) {
    return SparseC(A * B - B * A);
}

// Largest |C - c0 I| entry over the safe-subspace block.
inline double safe_block_deviation(const ModeSystem &sys, const SparseC &C,
                                   complexd c0) {
    MatrixC D = MatrixC(C);
    double worst = 0.0;
    for (int i = 0; i < sys.dim; ++i) {
        if (!sys.safe[i]) continue;
        for (int j = 0; j < sys.dim; ++j) {
            if (!sys.safe[j]) continue;
            complexd expect = (i == j) ? c0 : complexd(0.0, 0.0);
            worst = std::max(worst, std::abs(D(i, j) - expect));
        }
    }
    return worst;
}

struct ResidualEntry {
    std::string name;
    double residual = 0.0;
    double scale = 1.0;       // residuals are reported relative to this
    bool informational = false;
};

struct ResidualReport {
    std::vector<ResidualEntry> entries;

    double max_asserted() const {
        double m = 0.0;
        for (const auto &e : entries)
            if (!e.informational) m = std::max(m, e.residual / e.scale);
        return m;
    }
};

// Identities (i)-(iv): frequency-domain commutators, the band-limited
// time-domain kernel, the directional (light-cone) form per branch, and the
// time-evolved phases.
inline ResidualReport discrete_commutator_suite(const ModeSystem &sys) {
    ResidualReport rep;
    const double df = sys.delta_f;
    const double inv_df = 1.0 / df;

    // (i) [a(f_k), a+(f_k')] = delta_kk' / delta_f
    {
        double worst = 0.0;
        for (int k = 0; k < sys.M; ++k)
            for (int kp = 0; kp < sys.M; ++kp) {
                SparseC C = commutator(sys.a_f(k), SparseC(sys.a_f(kp).adjoint()));
                const complexd expect = (k == kp) ? complexd(inv_df, 0.0) : complexd(0.0, 0.0);
                worst = std::max(worst, safe_block_deviation(sys, C, expect));
            }
        rep.entries.push_back({"freq_commutator", worst, inv_df, false});
    }

    // (ii) [a(t_j), a+(t_j')] = D(t_j - t_j')
    {
        double worst = 0.0;
        for (int j = 0; j < sys.M; ++j)
            for (int jp = 0; jp < sys.M; ++jp) {
                SparseC C = commutator(sys.a_t(sys.t(j)), SparseC(sys.a_t(sys.t(jp)).adjoint()));
                worst = std::max(worst,
                                 safe_block_deviation(sys, C, band_kernel(sys, sys.t(j) - sys.t(jp))));
            }
        rep.entries.push_back({"time_commutator", worst, sys.M * df, false});
    }

    // (iii) directional branches: [a_{tau,s}(t), a+_{tau',s}(t')] = D((t-t') - s(tau-tau'))
    {
        double worst = 0.0;
        const double dtau = sys.dt();
        for (int sigma : {1, -1})
            for (double dtv : {0.0, sys.t(1)})
                for (double tauv : {dtau, 2.0 * dtau}) {
                    SparseC C = commutator(sys.a_t(dtv, tauv, sigma),
                                           SparseC(sys.a_t(0.0, 0.0, sigma).adjoint()));
                    const complexd expect = band_kernel(sys, dtv - sigma * tauv);
                    worst = std::max(worst, safe_block_deviation(sys, C, expect));
                }
        rep.entries.push_back({"directional_commutator", worst, sys.M * df, false});
    }

    // (iv) time evolution phases: [a(f_k, t), a+(f_k', t')] = delta_kk'
    //      e^{-i 2 pi f_k (t-t')} / delta_f
    {
        double worst = 0.0;
        const double tv = 0.37 / (sys.M * df), tpv = -0.11 / (sys.M * df);
        for (int k = 0; k < sys.M; ++k)
            for (int kp = 0; kp < sys.M; ++kp) {
                const double phk = -2.0 * pi * sys.f(k) * tv;
                const double phkp = -2.0 * pi * sys.f(kp) * tpv;
                SparseC ak = SparseC(complexd(std::cos(phk), std::sin(phk)) * sys.a_f(k));
                SparseC akp = SparseC(complexd(std::cos(phkp), std::sin(phkp)) * sys.a_f(kp));
                SparseC C = commutator(ak, SparseC(akp.adjoint()));
                complexd expect(0.0, 0.0);
                if (k == kp) {
                    const double ph = -2.0 * pi * sys.f(k) * (tv - tpv);
                    expect = complexd(std::cos(ph), std::sin(ph)) * inv_df;
                }
                worst = std::max(worst, safe_block_deviation(sys, C, expect));
            }
        rep.entries.push_back({"evolved_commutator", worst, inv_df, false});
    }
    return rep;
}

// Two directional branches as genuinely independent modes (2M of them); the
// localized-mode commutator picks up both light-cone kernels.
inline double two_branch_localized_residual(int M_per_branch, int n_max,
                                            double delta_f, double dtau,
                                            double dtv) {
    ModeSystem two = build_mode_system(2 * M_per_branch, n_max, delta_f);
    // branch sigma=+1 uses modes 0..M-1, sigma=-1 uses M..2M-1, both with the
    // same frequency ladder f_k = (k mod M + 1/2) delta_f
    auto a_loc = [&](double tau, double time) {
        SparseC acc(two.dim, two.dim);
        for (int k = 0; k < M_per_branch; ++k) {
            const double fk = (k + 0.5) * delta_f;
            const double php = -2.0 * pi * fk * (time - tau);
            const double phm = -2.0 * pi * fk * (time + tau);
            acc = acc + SparseC(complexd(std::cos(php), std::sin(php)) * two.b[k]);
            acc = acc + SparseC(complexd(std::cos(phm), std::sin(phm)) * two.b[M_per_branch + k]);
        }
        return SparseC(std::sqrt(delta_f) * acc);
    };
    SparseC C = commutator(a_loc(dtau, dtv), SparseC(a_loc(0.0, 0.0).adjoint()));
    // D over one branch's ladder
    complexd D1(0.0, 0.0), D2(0.0, 0.0);
    for (int k = 0; k < M_per_branch; ++k) {
        const double fk = (k + 0.5) * delta_f;
        D1 += std::polar(1.0, -2.0 * pi * fk * (dtv - dtau));
        D2 += std::polar(1.0, -2.0 * pi * fk * (dtv + dtau));
    }
    const complexd expect = delta_f * (D1 + D2);
    return safe_block_deviation(two, C, expect) / (M_per_branch * delta_f);
}

// One-particle matrices: H = h diag(f_k), T = U+ diag(t_j) U with the
// unitary half-offset DFT U. T has the closed form
// T_kk' = dt * [ (M-1)/2 if k = k', else 1/(e^{i 2 pi (k-k')/M} - 1) ].
struct SingleParticleRep {
    int M = 0;
    double delta_f = 0.0;
    double h = 1.0;
    MatrixC T;

    double f(int k) const { return (k + 0.5) * delta_f; }
    double dt() const { return 1.0 / (M * delta_f); }
};

inline SingleParticleRep build_single_particle(int M, double delta_f, double h = 1.0) {
    SingleParticleRep rep;
    rep.M = M;
    rep.delta_f = delta_f;
    rep.h = h;
    rep.T = MatrixC::Zero(M, M);
    const double dt = rep.dt();
    for (int k = 0; k < M; ++k)
        for (int kp = 0; kp < M; ++kp) {
            if (k == kp) {
                rep.T(k, kp) = complexd(dt * (M - 1) / 2.0, 0.0);
            } else {
                const double ang = 2.0 * pi * (k - kp) / M;
                rep.T(k, kp) = dt / (complexd(std::cos(ang), std::sin(ang)) - 1.0);
            }
        }
    return rep;
}

// || (HT - TH) psi - i hbar psi || / ||psi||, relative to hbar.
inline double single_particle_residual(const SingleParticleRep &rep, const VectorC &psi) {
    const double hbar = rep.h / (2.0 * pi);
    VectorC hpsi(rep.M), r;
    for (int k = 0; k < rep.M; ++k) hpsi(k) = rep.h * rep.f(k) * psi(k);
    VectorC t_h = rep.T * hpsi;
    VectorC t_psi = rep.T * psi;
    VectorC h_t(rep.M);
    for (int k = 0; k < rep.M; ++k) h_t(k) = rep.h * rep.f(k) * t_psi(k);
    r = h_t - t_h - complexd(0.0, hbar) * psi;
    return r.norm() / (hbar * psi.norm());
}

// Gaussian spectral profile with a linear phase that centres the time
// envelope at t_center (away from the periodic wrap).
inline VectorC gaussian_profile(int M, double delta_f, double f_center,
                                double width, double t_center) {
    VectorC c(M);
    for (int k = 0; k < M; ++k) {
        const double fk = (k + 0.5) * delta_f;
        const double amp = std::exp(-(fk - f_center) * (fk - f_center) / (4.0 * width * width));
        c(k) = std::polar(amp, 2.0 * pi * fk * t_center);
    }
    c.normalize();
    return c;
}

// Literal symmetric-ordered discrete forms of H, theta and N, plus the
// normal-ordered N and theta for the reporting split.
struct FockOperators {
    SparseC H_sym, theta_sym, N_sym, N_norm, theta_norm, H_norm;
};

inline FockOperators build_fock_operators(const ModeSystem &sys, double h = 1.0) {
    FockOperators ops;
    const int d = sys.dim;
    SparseC H(d, d), Hn(d, d), Th(d, d), Thn(d, d), Ns(d, d), Nn(d, d);
    for (int k = 0; k < sys.M; ++k) {
        SparseC bd = sys.bdag(k);
        SparseC num = SparseC(bd * sys.b[k]);
        SparseC anti = SparseC(num + SparseC(sys.b[k] * bd));
        H = H + SparseC((0.5 * h * sys.f(k)) * anti);
        Hn = Hn + SparseC((h * sys.f(k)) * num);
        Ns = Ns + SparseC(0.5 * anti);
        Nn = Nn + num;
    }
    const double dt = sys.dt();
    for (int j = 0; j < sys.M; ++j) {
        SparseC at = sys.a_t(sys.t(j));
        SparseC atd = SparseC(at.adjoint());
        SparseC num = SparseC(atd * at);
        SparseC anti = SparseC(num + SparseC(at * atd));
        Th = Th + SparseC((0.5 * dt * sys.t(j)) * anti);
        Thn = Thn + SparseC((dt * sys.t(j)) * num);
    }
    ops.H_sym = H;
    ops.H_norm = Hn;
    ops.theta_sym = Th;
    ops.theta_norm = Thn;
    ops.N_sym = Ns;
    ops.N_norm = Nn;
    return ops;
}

// |N>_A via repeated application of the packet creation form.
inline VectorC fock_packet_state(const ModeSystem &sys, const VectorC &profile, int N) {
    if (N > sys.n_max * sys.M)
        throw error("fock_packet_state: N exceeds the truncated occupancy");
    SparseC Ad = sys.creation_form(profile);
    VectorC v = sys.vacuum();
    for (int m = 1; m <= N; ++m) v = (Ad * v) / std::sqrt(double(m));
    const double nrm = v.norm();
    if (nrm < 0.5)
        throw error("fock_packet_state: state needs occupation beyond n_max");
    v /= nrm;
    return v;
}

// Truncated coherent state, renormalized; the truncation shows up as
// <N> != |alpha|^2 and is the caller's responsibility to inspect.
inline VectorC coherent_packet_state(const ModeSystem &sys, const VectorC &profile,
                                     complexd alpha) {
    SparseC Ad = sys.creation_form(profile);
    VectorC ket = sys.vacuum();  // |m>_A as the loop runs
    VectorC total = ket;
    complexd amp(1.0, 0.0);      // alpha^m / sqrt(m!)
    const int mmax = sys.n_max * sys.M;
    for (int m = 1; m <= mmax; ++m) {
        ket = (Ad * ket) / std::sqrt(double(m));
        amp *= alpha / std::sqrt(double(m));
        if (ket.norm() == 0.0) break;
        total += amp * ket;
        if (std::abs(amp) * ket.norm() < 1e-18) break;
    }
    total.normalize();
    return total;
}

inline double expectation(const SparseC &A, const VectorC &psi) {
    return (psi.adjoint() * (A * psi))(0).real();
}

inline double variance(const SparseC &A, const VectorC &psi) {
    VectorC ap = A * psi;
    const double m = (psi.adjoint() * ap)(0).real();
    const double m2 = ap.squaredNorm();  // A Hermitian
    return m2 - m * m;
}

// ||([H,theta] - i hbar N) psi|| / (hbar ||N psi||).
inline double fock_commutator_residual(const FockOperators &ops, const VectorC &psi,
                                       double h, bool normal_ordered_N) {
    const double hbar = h / (2.0 * pi);
    const SparseC &N = normal_ordered_N ? ops.N_norm : ops.N_sym;
    VectorC c = ops.H_sym * (ops.theta_sym * psi) - ops.theta_sym * (ops.H_sym * psi);
    VectorC npsi = N * psi;
    VectorC r = c - complexd(0.0, hbar) * npsi;
    const double den = hbar * npsi.norm();
    if (den == 0.0) return r.norm() > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    return r.norm() / den;
}

inline complexd commutator_expectation(const FockOperators &ops, const VectorC &psi) {
    VectorC c = ops.H_sym * (ops.theta_sym * psi) - ops.theta_sym * (ops.H_sym * psi);
    return (psi.adjoint() * c)(0);
}

// Exact matrix moments consumed by the uncertainty-margin check.
struct ThetaMoments {
    double theta_mean_sym = 0.0;
    double theta_mean_norm = 0.0;
    double theta_var = 0.0;
    double H_mean_sym = 0.0;
    double H_mean_norm = 0.0;
    double H_var = 0.0;
    double N_sym = 0.0;
    double N_norm = 0.0;
};

inline ThetaMoments theta_variance_oracle(const ModeSystem &sys, const FockOperators &ops,
                                          const VectorC &psi) {
    (void)sys;
    ThetaMoments m;
    m.theta_mean_sym = expectation(ops.theta_sym, psi);
    m.theta_mean_norm = expectation(ops.theta_norm, psi);
    m.theta_var = variance(ops.theta_sym, psi);
    m.H_mean_sym = expectation(ops.H_sym, psi);
    m.H_mean_norm = expectation(ops.H_norm, psi);
    m.H_var = variance(ops.H_sym, psi);
    m.N_sym = expectation(ops.N_sym, psi);
    m.N_norm = expectation(ops.N_norm, psi);
    return m;
}

// sqrt(<dTheta^2><dH^2>) - (hbar/2) <N>, with the normal-ordered <N> as the
// asserted bound and the symmetric one reported alongside. The spectral
// concentration flag marks H-eigenstate-like inputs where the discretized
// identity degrades.
struct UncertaintyReport {
    double lhs = 0.0;
    double margin_normal = 0.0;
    double margin_symmetric = 0.0;
    double n_normal = 0.0;
    double n_symmetric = 0.0;
    bool spectrally_concentrated = false;
};

inline UncertaintyReport uncertainty_margin(const ModeSystem &sys, const FockOperators &ops,
                                            const VectorC &psi, const VectorC &profile,
                                            double h = 1.0) {
    UncertaintyReport r;
    const double hbar = h / (2.0 * pi);
    ThetaMoments m = theta_variance_oracle(sys, ops, psi);
    r.lhs = std::sqrt(std::max(0.0, m.theta_var) * std::max(0.0, m.H_var));
    r.n_normal = m.N_norm;
    r.n_symmetric = m.N_sym;
    r.margin_normal = r.lhs - 0.5 * hbar * m.N_norm;
    r.margin_symmetric = r.lhs - 0.5 * hbar * m.N_sym;
    // participation ratio of |c_k|^2: 1 for a single bin
    double p2 = 0.0;
    for (int k = 0; k < profile.size(); ++k) p2 += std::norm(profile(k)) * std::norm(profile(k));
    if (p2 > 0.0 && 1.0 / p2 < 1.5) r.spectrally_concentrated = true;
    return r;
}

// Resamples a packet's spectrum onto the system's bins by direct evaluation
// of the discrete-time Fourier sum at f_k (exact at arbitrary frequencies).
inline VectorC resample_packet_spectrum(const PhotonPacket &p, const ModeSystem &sys) {
    VectorC phit(sys.M);
    const TimeGrid &g = p.grid();
    for (int k = 0; k < sys.M; ++k) {
        complexd acc(0.0, 0.0);
        const double fk = sys.f(k);
        for (int j = 0; j < g.n; ++j) {
            const double ph = 2.0 * pi * fk * g.t(j);
            acc += p.phi.samples[j] * complexd(std::cos(ph), std::sin(ph));
        }
        phit(k) = acc * g.dt;
    }
    return phit;
}

// Scalar part of [A, A+] on the safe subspace: delta_f sum_k |phi~(f_k)|^2,
// which equals the in-band positive-frequency weight up to leakage.
struct BosonicCheck {
    double value = 0.0;
    double leakage = 0.0;           // spectral mass outside the band
    double matrix_deviation = 0.0;  // vs the actual matrix commutator
};

inline BosonicCheck packet_bosonic_check(const PhotonPacket &p, const ModeSystem &sys) {
    BosonicCheck out;
    VectorC phit = resample_packet_spectrum(p, sys);
    double mass = 0.0;
    for (int k = 0; k < sys.M; ++k) mass += std::norm(phit(k));
    out.value = sys.delta_f * mass;

    // out-of-band positive-frequency mass on the packet's own fine grid
    Spectrum sp = forward_fourier(p.phi);
    const double f_lo = sys.f(0) - 0.5 * sys.delta_f;
    const double f_hi = sys.f(sys.M - 1) + 0.5 * sys.delta_f;
    double pos = 0.0, inband = 0.0;
    for (int k = 1; k <= sp.n() / 2; ++k) {
        const double m = std::norm(sp.bins[k]);
        pos += m;
        const double fk = sp.grid.f(k);
        if (fk > f_lo && fk <= f_hi) inband += m;
    }
    out.leakage = (pos > 0.0) ? (pos - inband) / pos : 0.0;

    // the matrix commutator with the resampled, band-normalized profile
    VectorC c = phit * std::sqrt(sys.delta_f);
    SparseC Ad = sys.creation_form(c);
    SparseC C = commutator(SparseC(Ad.adjoint()), Ad);
    out.matrix_deviation = safe_block_deviation(sys, C, complexd(out.value, 0.0));
    return out;
}

}  // namespace tdqo
