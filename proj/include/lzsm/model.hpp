#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "lzsm/error.hpp"
#include "lzsm/specfun/bessel.hpp"

namespace lzsm {

// Physical drive parameters, energies in any unit with v in energy^2.
struct DriveParams {
    double v = 1.0;        // sweep velocity
    double delta = 0.0;    // static transverse coupling
    double eps0 = 0.0;     // static detuning shift
    double amp_rf = 0.0;   // longitudinal drive amplitude A
    double freq_rf = 0.0;  // longitudinal drive frequency omega
    double amp_mw = 0.0;   // transverse drive amplitude A_f
    double freq_mw = 0.0;  // transverse drive frequency omega_f
    double phase = 0.0;    // relative phase phi (radians)
};

// Validated, dimensionless drive. For swept configurations (v > 0) every energy is
// divided by sqrt(v) and time is tau = t sqrt(v), so the ramp coefficient is 1.
// Unswept configurations (v = 0) keep native units and a zero ramp coefficient.
class DriveConfig {
public:
    DriveConfig() = default;

    static DriveConfig from_physical(const DriveParams& p) {
        check_common(p);
        if (!(p.v > 0.0)) throw ValidationError("DriveConfig: invariant v > 0 violated (v=" + num(p.v) + ")");
        const double s = std::sqrt(p.v);
        DriveConfig c;
        c.sweep_ = 1.0;
        c.delta_ = p.delta / s;
        c.eps0_ = p.eps0 / s;
        c.amp_rf_ = p.amp_rf / s;
        c.freq_rf_ = p.freq_rf / s;
        c.amp_mw_ = p.amp_mw / s;
        c.freq_mw_ = p.freq_mw / s;
        c.phase_ = p.phase;
        return c;
    }

    // Zero-sweep configuration used by the v = 0 special cases.
    static DriveConfig unswept(const DriveParams& p) {
        check_common(p);
        if (p.v != 0.0) throw ValidationError("DriveConfig::unswept: requires v = 0");
        DriveConfig c;
        c.sweep_ = 0.0;
        c.delta_ = p.delta;
        c.eps0_ = p.eps0;
        c.amp_rf_ = p.amp_rf;
        c.freq_rf_ = p.freq_rf;
        c.amp_mw_ = p.amp_mw;
        c.freq_mw_ = p.freq_mw;
        c.phase_ = p.phase;
        return c;
    }

    static DriveConfig from_any(const DriveParams& p) { return p.v == 0.0 ? unswept(p) : from_physical(p); }

    double sweep() const noexcept { return sweep_; }
    bool is_swept() const noexcept { return sweep_ != 0.0; }
    double delta() const noexcept { return delta_; }
    double eps0() const noexcept { return eps0_; }
    double amp_rf() const noexcept { return amp_rf_; }
    double freq_rf() const noexcept { return freq_rf_; }
    double amp_mw() const noexcept { return amp_mw_; }
    double freq_mw() const noexcept { return freq_mw_; }
    double phase() const noexcept { return phase_; }

    // A/omega, defined as 0 when the longitudinal drive is off.
    double bessel_argument() const noexcept { return amp_rf_ == 0.0 ? 0.0 : amp_rf_ / freq_rf_; }

    DriveConfig with_phase(double phi) const {
        if (!std::isfinite(phi)) throw ValidationError("DriveConfig: phase must be finite");
        DriveConfig c = *this;
        c.phase_ = phi;
        return c;
    }
    DriveConfig with_eps0(double e) const {
        if (!std::isfinite(e)) throw ValidationError("DriveConfig: eps0 must be finite");
        DriveConfig c = *this;
        c.eps0_ = e;
        return c;
    }

private:
    static std::string num(double x) { return std::to_string(x); }

    static void check_common(const DriveParams& p) {
        const double vals[] = {p.v, p.delta, p.eps0, p.amp_rf, p.freq_rf, p.amp_mw, p.freq_mw, p.phase};
        for (double x : vals)
            if (!std::isfinite(x)) throw ValidationError("DriveConfig: all fields must be finite");
        if (p.v < 0.0) throw ValidationError("DriveConfig: invariant v > 0 violated (v=" + num(p.v) + ")");
        if (p.amp_rf != 0.0 && !(p.freq_rf > 0.0))
            throw ValidationError("DriveConfig: freq_rf > 0 required when amp_rf != 0");
        if (p.amp_mw != 0.0 && !(p.freq_mw > 0.0))
            throw ValidationError("DriveConfig: freq_mw > 0 required when amp_mw != 0");
        if (p.freq_rf < 0.0 || p.freq_mw < 0.0) throw ValidationError("DriveConfig: frequencies must be >= 0");
    }

    double sweep_ = 1.0;
    double delta_ = 0.0, eps0_ = 0.0, amp_rf_ = 0.0, freq_rf_ = 0.0;
    double amp_mw_ = 0.0, freq_mw_ = 0.0, phase_ = 0.0;
};

// Transverse sub-crossing label.
enum class Branch : int { minus = -1, zero = 0, plus = 1 };

inline constexpr Branch kBranches[] = {Branch::minus, Branch::zero, Branch::plus};

inline int sign_of(Branch b) noexcept { return static_cast<int>(b); }

struct HarmonicIndex {
    int n = 0;
    Branch alpha = Branch::zero;
};

struct FieldVector {
    double bx = 0.0;
    double by = 0.0;
    double bz = 0.0;
};

using Hamiltonian2x2 = Eigen::Matrix2cd;

inline FieldVector field_vector(double tau, const DriveConfig& cfg) {
    FieldVector b;
    b.bx = cfg.delta() + cfg.amp_mw() * std::cos(cfg.freq_mw() * tau + cfg.phase());
    b.by = 0.0;
    b.bz = cfg.sweep() * tau + cfg.eps0() + cfg.amp_rf() * std::cos(cfg.freq_rf() * tau);
    return b;
}

inline Hamiltonian2x2 pauli_hamiltonian(const FieldVector& b) {
    using c = std::complex<double>;
    Hamiltonian2x2 h;
    h << c(0.5 * b.bz, 0.0), c(0.5 * b.bx, -0.5 * b.by),
         c(0.5 * b.bx, 0.5 * b.by), c(-0.5 * b.bz, 0.0);
    return h;
}

inline Hamiltonian2x2 hamiltonian(double tau, const DriveConfig& cfg) {
    return pauli_hamiltonian(field_vector(tau, cfg));
}

struct Eigenenergies {
    double up;
    double dn;
};

inline Eigenenergies eigenenergies(const FieldVector& b) {
    const double g = std::hypot(b.bx, b.by, b.bz);
    return {0.5 * g, -0.5 * g};
}

inline Eigenenergies eigenenergies(double tau, const DriveConfig& cfg) {
    return eigenenergies(field_vector(tau, cfg));
}

// Angle-parametrized form E = +/- b_x csc(2 varphi)/2 with varphi = arctan(-b_x/b_z)/2;
// undefined where b_z = 0 or b_x = 0. Returns |E| only, as the branch is not fixed.
inline std::optional<double> eigenenergy_csc_form(const FieldVector& b) {
    if (b.bz == 0.0 || b.bx == 0.0) return std::nullopt;
    const double varphi = 0.5 * std::atan(-b.bx / b.bz);
    return std::abs(0.5 * b.bx / std::sin(2.0 * varphi));
}

// omega_n^alpha = eps0 + n omega + alpha omega_f.
inline double level_offset(const HarmonicIndex& idx, const DriveConfig& cfg) {
    return cfg.eps0() + idx.n * cfg.freq_rf() + sign_of(idx.alpha) * cfg.freq_mw();
}

// Coupling Delta_alpha: 2 Delta for the static branch, A_f for the transverse drive.
inline double branch_coupling(Branch a, const DriveConfig& cfg) {
    return a == Branch::zero ? 2.0 * cfg.delta() : cfg.amp_mw();
}

// phi_alpha: +phi, 0, -phi.
inline double branch_phase(Branch a, const DriveConfig& cfg) { return sign_of(a) * cfg.phase(); }

// J_n^alpha = Delta_alpha/4 * J_n(A/omega).
inline double effective_coupling(const HarmonicIndex& idx, const DriveConfig& cfg) {
    if (cfg.amp_rf() != 0.0 && !(cfg.freq_rf() > 0.0))
        throw ValidationError("effective_coupling: omega must be > 0 when A != 0");
    return 0.25 * branch_coupling(idx.alpha, cfg) * specfun::bessel_j(idx.n, cfg.bessel_argument());
}

// Psi_n^alpha = (omega_n^alpha)^2/2 - phi_alpha.
inline double passage_phase(const HarmonicIndex& idx, const DriveConfig& cfg) {
    const double w = level_offset(idx, cfg);
    return 0.5 * w * w - branch_phase(idx.alpha, cfg);
}

}  // namespace lzsm
