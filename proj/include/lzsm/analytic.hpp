#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "lzsm/error.hpp"
#include "lzsm/integrate.hpp"
#include "lzsm/model.hpp"
#include "lzsm/specfun.hpp"

namespace lzsm {

struct CaleyKlein {
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};
    double norm2() const noexcept { return std::norm(a) + std::norm(b); }
    // [[a, b], [-b*, a*]]
    Eigen::Matrix2cd matrix() const {
        Eigen::Matrix2cd m;
        m << a, b, -std::conj(b), std::conj(a);
        return m;
    }
};

struct TransferMatrix {
    CaleyKlein ck;
    double psi = 0.0;
    // [[a, b e^{i psi}], [-b* e^{-i psi}, a*]]
    Eigen::Matrix2cd matrix() const {
        const cplx ph = std::polar(1.0, psi);
        Eigen::Matrix2cd m;
        m << ck.a, ck.b * ph, -std::conj(ck.b) * std::conj(ph), std::conj(ck.a);
        return m;
    }
};

struct PassagePropagator {
    cplx c{1.0, 0.0};
    cplx d{0.0, 0.0};
    double norm2() const noexcept { return std::norm(c) + std::norm(d); }
};

inline constexpr double kResonanceTol = 1e-6;

// n_alpha = -(eps0 + alpha omega_f)/omega, required to be an integer.
inline int resonance_index(Branch alpha, const DriveConfig& cfg) {
    if (!(cfg.freq_rf() > 0.0)) throw ValidationError("resonance_index: omega must be > 0");
    const double x = -(cfg.eps0() + sign_of(alpha) * cfg.freq_mw()) / cfg.freq_rf();
    const double r = std::round(x);
    if (std::abs(x - r) > kResonanceTol)
        throw OffResonanceError("resonance_index: -(eps0 + alpha*omega_f)/omega = " + std::to_string(x) +
                                " is not an integer");
    if (std::abs(r) > specfun::kBesselMaxOrder) throw OffResonanceError("resonance_index: harmonic order too large");
    return static_cast<int>(r);
}

namespace detail {

// Resonant coupling J_{n_alpha}^alpha. Branches with zero bare coupling need no
// resonance; without a longitudinal drive (A = omega = 0) only n = 0 exists.
inline double resonant_coupling(Branch a, const DriveConfig& cfg) {
    if (branch_coupling(a, cfg) == 0.0) return 0.0;
    if (cfg.amp_rf() == 0.0 && cfg.freq_rf() == 0.0) {
        const double w = cfg.eps0() + sign_of(a) * cfg.freq_mw();
        if (std::abs(w) > kResonanceTol)
            throw OffResonanceError("strong_drive_delta: branch detuning " + std::to_string(w) +
                                    " is nonzero without a longitudinal drive");
        return effective_coupling({0, a}, cfg);
    }
    return effective_coupling({resonance_index(a, cfg), a}, cfg);
}

}  // namespace detail

// delta = sum_{alpha,beta} J_{n_alpha}^alpha J_{n_beta}^beta cos(phi_alpha - phi_beta).
inline double strong_drive_delta(const DriveConfig& cfg) {
    std::array<double, 3> j{}, ph{};
    for (int i = 0; i < 3; ++i) {
        const Branch a = kBranches[i];
        j[i] = detail::resonant_coupling(a, cfg);
        ph[i] = branch_phase(a, cfg);
    }
    double delta = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) delta += j[i] * j[k] * std::cos(ph[i] - ph[k]);
    return std::max(delta, 0.0);
}

// Regrouped form: [J_0 + sum_{alpha != 0} J_alpha cos phi_alpha]^2 + sum_{alpha,beta != 0} J J sin sin.
inline double strong_drive_delta_regrouped(const DriveConfig& cfg) {
    const auto coupling = [&](Branch a) { return detail::resonant_coupling(a, cfg); };
    const double j0 = coupling(Branch::zero);
    const double jp = coupling(Branch::plus), jm = coupling(Branch::minus);
    const double pp = branch_phase(Branch::plus, cfg), pm = branch_phase(Branch::minus, cfg);
    const double first = j0 + jp * std::cos(pp) + jm * std::cos(pm);
    const double s = jp * std::sin(pp) + jm * std::sin(pm);
    return first * first + s * s;
}

// Zero-detuning form with Q = omega_f/omega:
// [Delta/2 + (J_Q + J_{-Q}) cos phi]^2 + (J_Q - J_{-Q})^2 sin^2 phi, J_{+-Q} = A_f/4 J_{+-Q}(A/omega).
inline double strong_drive_delta_zero_detuning(const DriveConfig& cfg) {
    if (cfg.eps0() != 0.0) throw UnsupportedConfigurationError("zero-detuning form requires eps0 = 0");
    const int q = resonance_index(Branch::minus, cfg);
    const double x = cfg.bessel_argument();
    const double jq = 0.25 * cfg.amp_mw() * specfun::bessel_j(q, x);
    const double jmq = 0.25 * cfg.amp_mw() * specfun::bessel_j(-q, x);
    const double c = 0.5 * cfg.delta() * specfun::bessel_j(0, x) + (jq + jmq) * std::cos(cfg.phase());
    const double s = (jq - jmq) * std::sin(cfg.phase());
    return c * c + s * s;
}

inline double lz_survival(double delta) { return std::exp(-2.0 * std::numbers::pi * delta); }

inline double strong_drive_survival(const DriveConfig& cfg) { return lz_survival(strong_drive_delta(cfg)); }

// Large-time Caley-Klein pair: a = e^{-pi delta}, b = sqrt(1 - e^{-2 pi delta}) e^{-i chi}.
inline CaleyKlein caley_klein_asymptotic(double delta) {
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw DomainError("caley_klein_asymptotic: delta must be finite and >= 0");
    const double p = lz_survival(delta);
    const double a = std::sqrt(p);
    const double bmag = std::sqrt(-std::expm1(-2.0 * std::numbers::pi * delta));
    return {a, std::polar(bmag, -specfun::stokes_phase(delta))};
}

// Weber-function expressions for the Landau-Zener Caley-Klein pair between z_i and z_f,
// z = tau e^{-i pi/4}. They equal (-i a_lab, -b_lab) for the propagator of
// H = [[tau/2, sqrt(delta)], [sqrt(delta), -tau/2]] started at the identity.
inline CaleyKlein weber_caley_klein(double delta, cplx z_start, cplx z_end) {
    using specfun::weber_d;
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw DomainError("weber_caley_klein: delta must be >= 0");
    const cplx i(0.0, 1.0);
    if (delta == 0.0) return {-i * std::exp((z_end * z_end - z_start * z_start) / 4.0), 0.0};
    const cplx nu(0.0, -delta);
    const cplx g = specfun::gamma(cplx(1.0, delta));
    const double s2pi = std::sqrt(2.0 * std::numbers::pi);
    const cplx f_m = weber_d(nu, -i * z_end), f_p = weber_d(nu, i * z_end);
    const cplx a = -i * g / s2pi * (f_m * weber_d(nu - 1.0, i * z_start) + f_p * weber_d(nu - 1.0, -i * z_start));
    const cplx b = g * std::polar(1.0, -std::numbers::pi / 4.0) / (s2pi * std::sqrt(delta)) *
                   (f_m * weber_d(nu, i * z_start) - f_p * weber_d(nu, -i * z_start));
    return {a, b};
}

// Caley-Klein pair of the interaction-frame passage H = sqrt(delta) [[0, e^{i tau^2/2}], [c.c., 0]]
// between z_start and z_end (identity at coincident arguments).
inline CaleyKlein caley_klein_finite(double delta, cplx z_start, cplx z_end) {
    const CaleyKlein w = weber_caley_klein(delta, z_start, z_end);
    const cplx i(0.0, 1.0);
    const cplx zf2 = z_end * z_end, zi2 = z_start * z_start;
    return {i * w.a * std::exp(-(zf2 - zi2) / 4.0), -w.b * std::exp(-(zf2 + zi2) / 4.0)};
}

inline cplx passage_argument(double tau, double offset) {
    return (tau + offset) * std::polar(1.0, -std::numbers::pi / 4.0);
}

struct PassageWindow {
    double tau_start = -50.0;
    double tau_end = 50.0;
};

// S_beta for harmonic idx; asymptotic Caley-Klein when window is empty.
inline TransferMatrix transfer_matrix(const HarmonicIndex& idx, const DriveConfig& cfg, bool asymptotic = true,
                                      PassageWindow window = {}) {
    const double j = effective_coupling(idx, cfg);
    const double delta = j * j;
    TransferMatrix t;
    t.psi = passage_phase(idx, cfg);
    if (asymptotic) {
        t.ck = caley_klein_asymptotic(delta);
    } else {
        const double w = level_offset(idx, cfg);
        t.ck = caley_klein_finite(delta, passage_argument(window.tau_start, w), passage_argument(window.tau_end, w));
    }
    if (j < 0.0) t.ck.b = -t.ck.b;
    return t;
}

// Entries of U = S_- S_0 S_+ for the n = 0 passage, written out term by term.
inline PassagePropagator single_passage_propagator(const DriveConfig& cfg) {
    const TransferMatrix sm = transfer_matrix({0, Branch::minus}, cfg);
    const TransferMatrix s0 = transfer_matrix({0, Branch::zero}, cfg);
    const TransferMatrix sp = transfer_matrix({0, Branch::plus}, cfg);
    const cplx am = sm.ck.a, a0 = s0.ck.a, ap = sp.ck.a;
    const cplx bm = sm.ck.b, b0 = s0.ck.b, bp = sp.ck.b;
    const double pm = sm.psi, p0 = s0.psi, pp = sp.psi;
    const auto e = [](double x) { return std::polar(1.0, x); };
    using std::conj;
    PassagePropagator u;
    u.c = ap * (a0 * am - conj(b0) * bm * e(-(p0 - pm))) -
          conj(bp) * (am * b0 * e(p0 - pp) + conj(a0) * bm * e(pm - pp));
    u.d = bm * e(pm) * (conj(a0) * conj(ap) - conj(b0) * bp * e(-(p0 - pp))) +
          am * (conj(ap) * b0 * e(p0) + a0 * bp * e(pp));
    return u;
}

// Four-path interference form of the survival probability after one passage.
// Path j contributes amplitude P_j e^{i s_j xi_j}; the second path enters with s_2 = -1.
inline Populations weak_drive_probabilities(const DriveConfig& cfg) {
    struct Branchwise {
        double a, bmag, sign, chi, psi;
    };
    const auto info = [&](Branch br) {
        const HarmonicIndex idx{0, br};
        const double j = effective_coupling(idx, cfg);
        const double delta = j * j;
        const CaleyKlein ck = caley_klein_asymptotic(delta);
        return Branchwise{ck.a.real(), std::abs(ck.b), j < 0.0 ? -1.0 : 1.0, specfun::stokes_phase(delta),
                          passage_phase(idx, cfg)};
    };
    const Branchwise m = info(Branch::minus), z = info(Branch::zero), p = info(Branch::plus);
    const std::array<double, 4> amp = {
        m.a * z.a * p.a,
        -m.bmag * z.bmag * p.a * m.sign * z.sign,
        -m.a * z.bmag * p.bmag * z.sign * p.sign,
        -m.bmag * z.a * p.bmag * m.sign * p.sign,
    };
    const std::array<double, 4> xi = {
        0.0,
        (z.psi - m.psi) - (z.chi - m.chi),
        (z.psi - p.psi) - (z.chi - p.chi),
        (m.psi - p.psi) - (m.chi - p.chi),
    };
    const std::array<double, 4> s = {1.0, -1.0, 1.0, 1.0};
    double p_up = 0.0;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) p_up += amp[j] * amp[k] * std::cos(s[j] * xi[j] - s[k] * xi[k]);
    return {p_up, 1.0 - p_up};
}

namespace detail {

inline bool close_rel(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); }

inline void require_unswept(const DriveConfig& cfg, const char* who) {
    if (cfg.is_swept()) throw UnsupportedConfigurationError(std::string(who) + ": requires v = 0");
    if (!(cfg.freq_rf() > 0.0)) throw UnsupportedConfigurationError(std::string(who) + ": requires omega > 0");
    if (cfg.eps0() != 0.0 || cfg.delta() != 0.0)
        throw UnsupportedConfigurationError(std::string(who) + ": requires eps0 = 0 and Delta = 0");
}

}  // namespace detail

// Zero-field case omega_f = omega, phi = 0: exact Rabi-type populations at time t.
inline Populations rabi_case(const DriveConfig& cfg, double t) {
    detail::require_unswept(cfg, "rabi_case");
    if (!detail::close_rel(cfg.freq_mw(), cfg.freq_rf()) && cfg.amp_mw() != 0.0)
        throw UnsupportedConfigurationError("rabi_case: requires omega_f = omega");
    if (cfg.phase() != 0.0) throw UnsupportedConfigurationError("rabi_case: requires phi = 0");
    if (!std::isfinite(t)) throw ValidationError("rabi_case: t must be finite");
    const double a2 = cfg.amp_rf() * cfg.amp_rf(), f2 = cfg.amp_mw() * cfg.amp_mw();
    if (a2 + f2 == 0.0) return {1.0, 0.0};
    const double w = cfg.freq_rf();
    const double arg = std::sqrt(a2 + f2) / (2.0 * w) * std::sin(w * t);
    const double sn = std::sin(arg), cs = std::cos(arg);
    const double p_dn = f2 / (a2 + f2) * sn * sn;
    const double p_up = a2 / (a2 + f2) + f2 / (a2 + f2) * cs * cs;
    return {p_up, p_dn};
}

struct InverseLzParameters {
    double v_eff;
    double delta_eff;
    double delta;
};

inline InverseLzParameters inverse_lz_parameters(const DriveConfig& cfg) {
    const double w = cfg.freq_rf();
    const double v_eff = 2.0 * cfg.amp_mw() / w;
    const double d_eff = -cfg.amp_rf() / w;
    return {v_eff, d_eff, d_eff * d_eff / (4.0 * v_eff)};
}

// Zero-field case omega_f = 2 omega, phi = pi/2, start at t_i = 0. The Weber-form
// Caley-Klein pair evaluated at z = sqrt(v_eff) sin(omega t) e^{-i pi/4} yields the
// diabatic populations as P_dn = (Re a)^2 + (Re b)^2, P_up = (Im a)^2 + (Im b)^2.
// The pair carries the constant phases (-i, -1) relative to the identity-normalized
// propagator, which is why P_dn vanishes at t_f = t_i.
inline Populations inverse_lz_case(const DriveConfig& cfg, double t_f) {
    detail::require_unswept(cfg, "inverse_lz_case");
    if (!detail::close_rel(cfg.freq_mw(), 2.0 * cfg.freq_rf()))
        throw UnsupportedConfigurationError("inverse_lz_case: requires omega_f = 2 omega");
    if (std::abs(cfg.phase() - std::numbers::pi / 2.0) > 1e-12)
        throw UnsupportedConfigurationError("inverse_lz_case: requires phi = pi/2");
    if (!(cfg.amp_mw() > 0.0)) throw UnsupportedConfigurationError("inverse_lz_case: requires A_f > 0");
    if (!std::isfinite(t_f)) throw ValidationError("inverse_lz_case: t_f must be finite");
    const InverseLzParameters p = inverse_lz_parameters(cfg);
    const cplx z = std::sqrt(p.v_eff) * std::sin(cfg.freq_rf() * t_f) * std::polar(1.0, -std::numbers::pi / 4.0);
    const CaleyKlein w = weber_caley_klein(p.delta, 0.0, z);
    const double p_dn = w.a.real() * w.a.real() + w.b.real() * w.b.real();
    const double p_up = w.a.imag() * w.a.imag() + w.b.imag() * w.b.imag();
    return {p_up, p_dn};
}

}  // namespace lzsm
