#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "lzsm/analytic.hpp"
#include "lzsm/error.hpp"
#include "lzsm/integrate.hpp"
#include "lzsm/model.hpp"
#include "lzsm/specfun.hpp"

namespace lzsm {

using specfun::ExtReal;

struct LMKernel {
    double l;  // C(x) sin y - cos y S(x)
    double m;  // C(x) cos y + sin y S(x)
};

inline LMKernel lm_kernel(ExtReal x, double y) {
    const auto f = specfun::scaled_fresnel(x);
    const double sy = std::sin(y), cy = std::cos(y);
    return {f.c * sy - cy * f.s, f.c * cy + sy * f.s};
}

struct FGKernels {
    double f_plus;
    double f_minus;
    double g_plus;
    double g_minus;
};

// F+-(x,x') = [C(x)C(x') +- S(x)S(x')]/2, G+-(x,x') = [C(x)S(x') +- S(x)C(x')]/2.
inline FGKernels fg_kernels(ExtReal x, ExtReal xp) {
    const auto a = specfun::scaled_fresnel(x);
    const auto b = specfun::scaled_fresnel(xp);
    return {0.5 * (a.c * b.c + a.s * b.s), 0.5 * (a.c * b.c - a.s * b.s), 0.5 * (a.c * b.s + a.s * b.c),
            0.5 * (a.c * b.s - a.s * b.c)};
}

// K_n^alpha(tau) = (tau + omega_n^alpha)^2/2 - Psi_n^alpha.
inline double phase_kernel(double tau, const HarmonicIndex& idx, const DriveConfig& cfg) {
    const double x = tau + level_offset(idx, cfg);
    return 0.5 * x * x - passage_phase(idx, cfg);
}

struct TruncationSpec {
    int n_max = 40;
};

inline int min_truncation(const DriveConfig& cfg) { return int(std::ceil(std::abs(cfg.bessel_argument()))); }

inline TruncationSpec default_truncation(const DriveConfig& cfg) {
    return {std::max(min_truncation(cfg) + 20, 40)};
}

inline void validate_truncation(const TruncationSpec& t, const DriveConfig& cfg) {
    if (t.n_max < 1) throw ValidationError("TruncationSpec: n_max must be positive");
    if (t.n_max < min_truncation(cfg)) throw ValidationError("TruncationSpec: n_max must be >= ceil(A/omega)");
    if (t.n_max > specfun::kBesselMaxOrder) throw ValidationError("TruncationSpec: n_max too large");
}

enum class HarmonicSelection { all, resonant };

// Precomputed (n, alpha) data for n in [-n_max, n_max].
class HarmonicTable {
public:
    struct Entry {
        HarmonicIndex idx;
        double coupling;  // J_n^alpha
        double offset;    // omega_n^alpha
        double psi;       // Psi_n^alpha
    };

    HarmonicTable(const DriveConfig& cfg, const TruncationSpec& trunc) : n_max_(trunc.n_max) {
        validate_truncation(trunc, cfg);
        const specfun::BesselTable jt(trunc.n_max, cfg.bessel_argument());
        for (int n = -n_max_; n <= n_max_; ++n) {
            bessel_.push_back(jt(n));
            offset0_.push_back(level_offset({n, Branch::zero}, cfg));
            for (Branch a : kBranches) {
                const HarmonicIndex idx{n, a};
                const double c = 0.25 * branch_coupling(a, cfg) * jt(n);
                entries_.push_back({idx, c, level_offset(idx, cfg), passage_phase(idx, cfg)});
            }
        }
    }

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    int n_max() const noexcept { return n_max_; }
    double bessel(int n) const { return bessel_[std::size_t(n + n_max_)]; }
    double offset0(int n) const { return offset0_[std::size_t(n + n_max_)]; }

private:
    int n_max_;
    std::vector<Entry> entries_;
    std::vector<double> bessel_;
    std::vector<double> offset0_;
};

struct AcAs {
    double a_c;
    double a_s;
};

// First-order (weak coupling, non-adiabatic) Bloch solution starting from the north pole.
class PerturbativeBloch {
public:
    PerturbativeBloch(const DriveConfig& cfg, const TruncationSpec& trunc) : table_(cfg, trunc) {}
    explicit PerturbativeBloch(const DriveConfig& cfg) : PerturbativeBloch(cfg, default_truncation(cfg)) {}

    const HarmonicTable& table() const noexcept { return table_; }

    // a_c + i a_s = sum_n J_n(A/omega) exp(i K_n^0(tau)).
    AcAs ac_as(double tau) const {
        double ac = 0.0, as = 0.0;
        for (int n = -table_.n_max(); n <= table_.n_max(); ++n) {
            const double w = table_.offset0(n);
            const double k = 0.5 * (tau + w) * (tau + w) - 0.5 * w * w;
            ac += table_.bessel(n) * std::cos(k);
            as += table_.bessel(n) * std::sin(k);
        }
        return {ac, as};
    }

    // (sum J L, sum J M) at tau
    std::pair<double, double> lm_sums(ExtReal tau) const {
        double sl = 0.0, sm = 0.0;
        for (const auto& e : table_.entries()) {
            if (e.coupling == 0.0) continue;
            const LMKernel k = lm_kernel(tau + e.offset, e.psi);
            sl += e.coupling * k.l;
            sm += e.coupling * k.m;
        }
        return {sl, sm};
    }

    // Sum-of-squares form 1 - 2 pi [(sum J L)^2 + (sum J M)^2]; defined at both sentinels.
    double uz(ExtReal tau) const {
        const auto [sl, sm] = lm_sums(tau);
        return 1.0 - 2.0 * std::numbers::pi * (sl * sl + sm * sm);
    }

    // Full vector; at +inf the transverse components keep oscillating, so only
    // finite tau and -inf are accepted.
    BlochVector evaluate(ExtReal tau) const {
        if (tau.kind() == ExtReal::Kind::pos_inf)
            throw DomainError("bloch_perturbative: transverse components have no limit at +inf");
        const auto [sl, sm] = lm_sums(tau);
        const double pi = std::numbers::pi;
        BlochVector u;
        u.uz = 1.0 - 2.0 * pi * (sl * sl + sm * sm);
        if (!tau.is_finite()) {
            u.ux = 0.0;
            u.uy = 0.0;
            return u;
        }
        const AcAs a = ac_as(tau.value());
        const double sp = 2.0 * std::sqrt(pi);
        u.ux = sp * (a.a_c * sl + a.a_s * sm);
        u.uy = sp * (a.a_s * sl - a.a_c * sm);
        return u;
    }

    // Double-sum kernel form 1 - 4 pi sum J J [cos(Psi - Psi') F+ - sin(Psi - Psi') G-].
    double uz_kernel_form(ExtReal tau) const {
        const auto& es = table_.entries();
        std::vector<specfun::ScaledFresnel> f;
        f.reserve(es.size());
        for (const auto& e : es) f.push_back(specfun::scaled_fresnel(tau + e.offset));
        double acc = 0.0;
        for (std::size_t i = 0; i < es.size(); ++i) {
            if (es[i].coupling == 0.0) continue;
            for (std::size_t j = 0; j < es.size(); ++j) {
                if (es[j].coupling == 0.0) continue;
                const double fp = 0.5 * (f[i].c * f[j].c + f[i].s * f[j].s);
                const double gm = 0.5 * (f[i].c * f[j].s - f[i].s * f[j].c);
                const double dpsi = es[i].psi - es[j].psi;
                acc += es[i].coupling * es[j].coupling * (std::cos(dpsi) * fp - std::sin(dpsi) * gm);
            }
        }
        return 1.0 - 4.0 * std::numbers::pi * acc;
    }

private:
    HarmonicTable table_;
};

inline AcAs ac_as(double tau, const DriveConfig& cfg, const TruncationSpec& trunc) {
    return PerturbativeBloch(cfg, trunc).ac_as(tau);
}

inline BlochVector bloch_perturbative(ExtReal tau, const DriveConfig& cfg, const TruncationSpec& trunc) {
    return PerturbativeBloch(cfg, trunc).evaluate(tau);
}

// u_z(+inf) = 1 - 4 pi sum_{n,m,alpha,beta} J_n^alpha J_m^beta cos(Psi_n^alpha - Psi_m^beta).
// With HarmonicSelection::resonant only n = n_alpha enters for each resonant branch.
inline double bloch_asymptotic_uz(const DriveConfig& cfg, const TruncationSpec& trunc,
                                  HarmonicSelection sel = HarmonicSelection::all) {
    double c = 0.0, s = 0.0;
    if (sel == HarmonicSelection::all) {
        const HarmonicTable table(cfg, trunc);
        for (const auto& e : table.entries()) {
            c += e.coupling * std::cos(e.psi);
            s += e.coupling * std::sin(e.psi);
        }
    } else {
        validate_truncation(trunc, cfg);
        for (Branch a : kBranches) {
            const int n = resonance_index(a, cfg);
            if (std::abs(n) > trunc.n_max) continue;
            const HarmonicIndex idx{n, a};
            const double j = effective_coupling(idx, cfg);
            const double psi = passage_phase(idx, cfg);
            c += j * std::cos(psi);
            s += j * std::sin(psi);
        }
    }
    return 1.0 - 4.0 * std::numbers::pi * (c * c + s * s);
}

}  // namespace lzsm
