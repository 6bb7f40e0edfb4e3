#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lzsm/analytic.hpp"
#include "lzsm/integrate.hpp"

using namespace lzsm;
using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

DriveConfig make(double delta, double eps0, double a, double w, double af, double wf, double phi) {
    DriveParams p;
    p.delta = delta;
    p.eps0 = eps0;
    p.amp_rf = a;
    p.freq_rf = w;
    p.amp_mw = af;
    p.freq_mw = wf;
    p.phase = phi;
    return DriveConfig::from_physical(p);
}

DriveConfig unswept(double a, double w, double af, double wf, double phi) {
    DriveParams p;
    p.v = 0.0;
    p.amp_rf = a;
    p.freq_rf = w;
    p.amp_mw = af;
    p.freq_mw = wf;
    p.phase = phi;
    return DriveConfig::unswept(p);
}

// Full propagator of a field between t0 and t1, columns evolved from |up>, |dn>.
template <class F>
Eigen::Matrix2cd numeric_propagator(F field, double t0, double t1) {
    const auto s = make_settings(1e-12, 1.0);
    const SpinState u = evolve_tdse_field(field, SpinState{{1, 0}, {0, 0}}, t0, t1, s);
    const SpinState d = evolve_tdse_field(field, SpinState{{0, 0}, {1, 0}}, t0, t1, s);
    Eigen::Matrix2cd m;
    m << u.c_up, d.c_up, u.c_dn, d.c_dn;
    return m;
}

double unitarity_defect(const Eigen::Matrix2cd& m) {
    return (m * m.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

DriveConfig random_weak(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return make(0.1 * u(rng), 4.0 * u(rng) - 2.0, 30.0 * u(rng), 1.0 + 99.0 * u(rng), 0.1 * u(rng), 0.2 + 2.0 * u(rng),
                2.0 * kPi * u(rng));
}

double final_p_up(const DriveConfig& cfg) {
    return populations(evolve_tdse_field(drive_field(cfg), SpinState{}, -50.0, 50.0, make_settings(1e-10, 1.0))).p_up;
}

}  // namespace

// ---------------- resonance and strong drive ----------------

TEST(Resonance, Index) {
    EXPECT_EQ(resonance_index(Branch::zero, make(0, 0, 1, 1, 0, 0, 0)), 0);
    EXPECT_EQ(resonance_index(Branch::plus, make(0, 0, 1, 100, 0.08, 200, 0)), -2);
    EXPECT_EQ(resonance_index(Branch::minus, make(0, 0, 1, 100, 0.08, 200, 0)), 2);
    EXPECT_THROW(resonance_index(Branch::zero, make(0, 0.3, 1, 1, 0, 0, 0)), OffResonanceError);
    EXPECT_EQ(resonance_index(Branch::zero, make(0, 3.0000000001, 1, 1, 0, 0, 0)), -3);
    EXPECT_THROW(resonance_index(Branch::zero, make(0, 0.3, 0, 0, 0, 0, 0)), ValidationError);
}

TEST(StrongDrive, ReducesToLandauZenerWithoutDrive) {
    EXPECT_NEAR(strong_drive_delta(make(0.07, 0, 0, 1, 0.08, 3, 0.4)), 0.07 * 0.07 / 4.0, 1e-16);
    EXPECT_NEAR(strong_drive_delta(make(0.07, 0, 0, 0, 0, 0, 0)), 0.07 * 0.07 / 4.0, 1e-16);
    EXPECT_NEAR(strong_drive_survival(make(0.07, 0, 0, 0, 0, 0, 0)), 0.99233, 5e-6);
    EXPECT_EQ(strong_drive_survival(make(0, 0, 0, 0, 0, 0, 0)), 1.0);
    EXPECT_THROW(strong_drive_delta(make(0.07, 0.2, 0, 0, 0, 0, 0)), OffResonanceError);
}

TEST(StrongDrive, QuarterPhaseEvenHarmonicKeepsOnlyStaticTerm) {
    for (double ratio : {0.0, 0.5, 1.0, 2.0}) {
        const auto cfg = make(0.1, 0, 100 * ratio, 100, 0.08, 200, kPi / 2);
        const double j0 = specfun::bessel_j(0, ratio);
        EXPECT_NEAR(strong_drive_delta(cfg), std::pow(0.1 * j0 / 2.0, 2), 1e-15) << ratio;
    }
}

TEST(StrongDrive, DoubleSumRegroupedAndZeroDetuningFormsAgreeRandom) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> uq(1, 6);
    for (int i = 0; i < 200; ++i) {
        const double w = 1.0 + 99.0 * u(rng);
        const auto cfg = make(0.3 * u(rng), 0, 6.0 * w * u(rng), w, 0.2 * u(rng), uq(rng) * w, 2.0 * kPi * u(rng));
        const double d = strong_drive_delta(cfg);
        EXPECT_NEAR(d, strong_drive_delta_regrouped(cfg), 1e-12);
        EXPECT_NEAR(d, strong_drive_delta_zero_detuning(cfg), 1e-12);
        EXPECT_GE(d, 0.0);
    }
    EXPECT_THROW(strong_drive_delta_zero_detuning(make(0.1, 1, 1, 1, 0.1, 2, 0)), UnsupportedConfigurationError);
}

TEST(StrongDrive, PhaseSignInvarianceRandom) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> uq(1, 5), un(-3, 3);
    for (int i = 0; i < 100; ++i) {
        const double w = 1.0 + 9.0 * u(rng);
        const auto cfg = make(0.3 * u(rng), un(rng) * w, 5.0 * w * u(rng), w, 0.2 * u(rng), uq(rng) * w,
                              2.0 * kPi * u(rng));
        EXPECT_NEAR(strong_drive_survival(cfg), strong_drive_survival(cfg.with_phase(-cfg.phase())), 1e-14);
    }
}

TEST(StrongDrive, CoherentDestructionOfTunneling) {
    for (double delta : {0.05, 0.1, 0.2, 0.3}) {
        const auto cfg = make(delta, 0, 240.4826, 100, 0, 200, 0);
        EXPECT_NEAR(strong_drive_survival(cfg), 1.0, 1e-10);
    }
}

TEST(StrongDrive, OffResonancePropagates) {
    EXPECT_THROW(strong_drive_delta(make(0.1, 0.3, 1, 1, 0.08, 2, 0)), OffResonanceError);
    EXPECT_THROW(strong_drive_delta(make(0.1, 0, 1, 1, 0.08, 1.5, 0)), OffResonanceError);
}

// ---------------- Caley-Klein ----------------

TEST(CaleyKlein, AsymptoticValues) {
    auto ck = caley_klein_asymptotic(0.0);
    EXPECT_EQ(ck.a, cd(1.0, 0.0));
    EXPECT_EQ(std::abs(ck.b), 0.0);
    ck = caley_klein_asymptotic(0.1);
    EXPECT_NEAR(std::abs(ck.a), std::exp(-0.1 * kPi), 1e-15);
    EXPECT_NEAR(std::abs(ck.a), 0.73040, 5e-6);
    EXPECT_EQ(ck.a.imag(), 0.0);
    EXPECT_NEAR(std::arg(ck.b), -specfun::stokes_phase(0.1), 1e-15);
    ck = caley_klein_asymptotic(40.0);
    EXPECT_LT(std::abs(ck.a), 1e-50);
    EXPECT_NEAR(std::abs(ck.b), 1.0, 1e-15);
    EXPECT_THROW(caley_klein_asymptotic(-0.1), DomainError);
    EXPECT_THROW(caley_klein_asymptotic(INFINITY), DomainError);
}

TEST(CaleyKlein, AsymptoticUnitaryRandom) {
    std::mt19937_64 rng(43);
    std::exponential_distribution<double> e(2.0);
    for (int i = 0; i < 200; ++i) {
        const auto ck = caley_klein_asymptotic(e(rng));
        EXPECT_NEAR(ck.norm2(), 1.0, 1e-14);
        EXPECT_LE(unitarity_defect(ck.matrix()), 1e-14);
    }
}

TEST(CaleyKlein, FiniteIdentityCases) {
    for (double tau : {-7.0, 0.0, 3.5}) {
        const auto ck = caley_klein_finite(0.3, passage_argument(tau, 0.2), passage_argument(tau, 0.2));
        EXPECT_LE(std::abs(ck.a - 1.0), 1e-9);
        EXPECT_LE(std::abs(ck.b), 1e-9);
    }
    const auto z = caley_klein_finite(0.0, passage_argument(-20, 0), passage_argument(13, 0));
    EXPECT_LE(std::abs(z.a - 1.0), 1e-15);
    EXPECT_EQ(std::abs(z.b), 0.0);
}

TEST(CaleyKlein, FiniteMatchesInteractionFrameNumerics) {
    for (double delta : {0.1, 0.5}) {
        const double g = std::sqrt(delta);
        const auto field = [g](double t) {
            return FieldVector{2.0 * g * std::cos(t * t / 2.0), -2.0 * g * std::sin(t * t / 2.0), 0.0};
        };
        for (auto [t0, t1] : {std::pair{-10.0, 10.0}, std::pair{-3.0, 25.0}, std::pair{4.0, 9.0}}) {
            const auto ck = caley_klein_finite(delta, passage_argument(t0, 0), passage_argument(t1, 0));
            const Eigen::Matrix2cd u = numeric_propagator(field, t0, t1);
            EXPECT_LE((ck.matrix() - u).cwiseAbs().maxCoeff(), 1e-4) << delta << ' ' << t0 << ' ' << t1;
            EXPECT_LE((ck.matrix() - u).cwiseAbs().maxCoeff(), 1e-8) << delta << ' ' << t0 << ' ' << t1;
        }
    }
}

TEST(CaleyKlein, WeberFormMatchesLabFrameUpToConstantPhases) {
    const double delta = 0.3, g = std::sqrt(delta);
    const auto field = [g](double t) { return FieldVector{2.0 * g, 0.0, t}; };
    const Eigen::Matrix2cd u = numeric_propagator(field, -6.0, 8.0);
    const auto w = weber_caley_klein(delta, passage_argument(-6.0, 0), passage_argument(8.0, 0));
    EXPECT_LE(std::abs(w.a - cd(0, -1) * u(0, 0)), 1e-8);
    EXPECT_LE(std::abs(w.b + u(0, 1)), 1e-8);
}

TEST(CaleyKlein, FiniteUnitaryRandom) {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> ud(0.0, 2.0), ut(-40.0, 40.0);
    for (int i = 0; i < 100; ++i) {
        const double d = ud(rng);
        const double a = ut(rng), b = ut(rng);
        const auto ck = caley_klein_finite(d, passage_argument(std::min(a, b), 0), passage_argument(std::max(a, b), 0));
        EXPECT_NEAR(ck.norm2(), 1.0, 1e-8) << d << ' ' << a << ' ' << b;
    }
}

// ---------------- transfer matrices and single passage ----------------

TEST(TransferMatrix, ZeroCouplingIsIdentityWithPhase) {
    const auto cfg = make(0.07, 0.5, 0, 0, 0.08, 1, 0.7);
    const auto t = transfer_matrix({3, Branch::plus}, make(0.07, 0.5, 2.0, 1.0, 0.0, 1.0, 0.7));
    EXPECT_EQ(t.ck.a, cd(1.0, 0.0));
    EXPECT_EQ(std::abs(t.ck.b), 0.0);
    EXPECT_DOUBLE_EQ(t.psi, 0.5 * std::pow(0.5 + 3.0 + 1.0, 2) - 0.7);
    EXPECT_DOUBLE_EQ(transfer_matrix({0, Branch::minus}, cfg).psi, 0.125 + 0.7);
}

TEST(TransferMatrix, UnitaryRandom) {
    std::mt19937_64 rng(45);
    std::uniform_int_distribution<int> un(-5, 5), ub(-1, 1);
    for (int i = 0; i < 100; ++i) {
        const auto cfg = random_weak(rng);
        const HarmonicIndex idx{un(rng), Branch(ub(rng))};
        EXPECT_LE(unitarity_defect(transfer_matrix(idx, cfg).matrix()), 1e-12);
        const auto slow = make(cfg.delta(), cfg.eps0(), cfg.amp_rf(), 0.2 + 1.8 * cfg.freq_rf() / 100.0, cfg.amp_mw(),
                               cfg.freq_mw(), cfg.phase());
        const auto fin = transfer_matrix(idx, slow, false, {-20.0, 20.0});
        EXPECT_LE(unitarity_defect(fin.matrix()), 1e-8);
    }
}

TEST(SinglePassage, ZeroCouplingIsIdentity) {
    const auto u = single_passage_propagator(make(0, 0.4, 0, 0, 0, 0, 0.2));
    EXPECT_EQ(u.c, cd(1.0, 0.0));
    EXPECT_EQ(u.d, cd(0.0, 0.0));
    const auto p = weak_drive_probabilities(make(0, 0.4, 0, 0, 0, 0, 0.2));
    EXPECT_EQ(p.p_up, 1.0);
    EXPECT_EQ(p.p_dn, 0.0);
}

TEST(SinglePassage, MatchesMatrixProductRandom) {
    std::mt19937_64 rng(46);
    for (int i = 0; i < 100; ++i) {
        const auto cfg = random_weak(rng);
        const Eigen::Matrix2cd m = transfer_matrix({0, Branch::minus}, cfg).matrix() *
                                   transfer_matrix({0, Branch::zero}, cfg).matrix() *
                                   transfer_matrix({0, Branch::plus}, cfg).matrix();
        const auto u = single_passage_propagator(cfg);
        EXPECT_LE(std::abs(u.c - m(0, 0)), 1e-12);
        EXPECT_LE(std::abs(u.d - m(0, 1)), 1e-12);
        EXPECT_NEAR(u.norm2(), 1.0, 1e-8);
    }
}

TEST(SinglePassage, SidebandBranchesShareCaleyKlein) {
    std::mt19937_64 rng(47);
    for (int i = 0; i < 20; ++i) {
        const auto cfg = random_weak(rng);
        const auto p = transfer_matrix({0, Branch::plus}, cfg), m = transfer_matrix({0, Branch::minus}, cfg);
        EXPECT_EQ(p.ck.a, m.ck.a);
        EXPECT_EQ(p.ck.b, m.ck.b);
    }
}

TEST(WeakDrive, EqualsSquaredPassageAmplitudeRandom) {
    std::mt19937_64 rng(48);
    for (int i = 0; i < 200; ++i) {
        const auto cfg = random_weak(rng);
        const auto p = weak_drive_probabilities(cfg);
        EXPECT_NEAR(p.p_up, std::norm(single_passage_propagator(cfg).c), 1e-10);
        EXPECT_NEAR(p.p_up + p.p_dn, 1.0, 1e-15);
    }
}

TEST(WeakDrive, MatchesNumericsForWeakCouplingConfigs) {
    for (double phi : {0.0, 1.3, 4.0})
        for (double eps0 : {-1.5, 0.0, 0.5}) {
            const auto hi = make(0.07, eps0, 1, 50, 0.08, 1, phi);
            EXPECT_NEAR(weak_drive_probabilities(hi).p_up, final_p_up(hi), 2e-2) << phi << ' ' << eps0;
            const auto lo = make(0.0075, eps0, 29, 100, 0.08, 1, phi);
            EXPECT_NEAR(weak_drive_probabilities(lo).p_up, final_p_up(lo), 2e-2) << phi << ' ' << eps0;
        }
}

// ---------------- zero-field special cases ----------------

TEST(Rabi, ClosedFormLimits) {
    const auto cfg = unswept(1.0, 1.0, 1.0, 1.0, 0.0);
    auto p = rabi_case(cfg, 0.0);
    EXPECT_EQ(p.p_up, 1.0);
    EXPECT_EQ(p.p_dn, 0.0);
    const auto a0 = unswept(0.0, 2.0, 0.7, 2.0, 0.0);
    for (double t : {0.3, 1.1, 2.9}) {
        p = rabi_case(a0, t);
        EXPECT_NEAR(p.p_dn, std::pow(std::sin(0.7 * std::sin(2.0 * t) / 4.0), 2), 1e-15);
        EXPECT_NEAR(p.p_up + p.p_dn, 1.0, 1e-15);
    }
}

TEST(Rabi, MatchesNumericsOfUnsweptHamiltonian) {
    for (auto [a, af, w] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{0.3, 2.0, 1.5}, std::tuple{3.0, 0.5, 0.7}}) {
        const auto cfg = unswept(a, w, af, w, 0.0);
        const auto tr = propagate_tdse(cfg, SpinState{}, 0.0, 4.0 * kPi / w, 1e-12, 0.05);
        for (const auto& s : tr.samples) EXPECT_NEAR(rabi_case(cfg, s.tau).p_dn, populations(s.state).p_dn, 1e-6);
    }
    const auto cfg = unswept(1.0, 1.0, 1.0, 1.0, 0.0);
    const auto s = evolve_tdse_field(drive_field(cfg), SpinState{}, 0.0, kPi / 2, make_settings(1e-12, 1.0));
    EXPECT_NEAR(rabi_case(cfg, kPi / 2).p_dn, populations(s).p_dn, 1e-6);
}

TEST(Rabi, RejectsUnsupportedConfigurations) {
    EXPECT_THROW(rabi_case(make(0, 0, 1, 1, 1, 1, 0), 1.0), UnsupportedConfigurationError);
    EXPECT_THROW(rabi_case(unswept(1, 1, 1, 2, 0), 1.0), UnsupportedConfigurationError);
    EXPECT_THROW(rabi_case(unswept(1, 1, 1, 1, 0.2), 1.0), UnsupportedConfigurationError);
}

TEST(InverseLz, CompletenessRandom) {
    std::mt19937_64 rng(49);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double w = 0.5 + u(rng);
        const auto cfg = unswept(2.0 * u(rng), w, 0.2 + 2.0 * u(rng), 2.0 * w, kPi / 2);
        const auto p = inverse_lz_case(cfg, 20.0 * u(rng));
        EXPECT_NEAR(p.p_up + p.p_dn, 1.0, 1e-6);
    }
}

TEST(InverseLz, ZeroLongitudinalAmplitudeClosedForm) {
    const auto cfg = unswept(0.0, 1.0, 1.0, 2.0, kPi / 2);
    for (double t : {0.0, 0.4, kPi / 4, 2.0, 5.5}) {
        const double s = std::sin(t);
        EXPECT_NEAR(inverse_lz_case(cfg, t).p_dn, std::pow(std::sin(s * s / 2.0), 2), 1e-12) << t;
    }
}

TEST(InverseLz, MatchesDirectAndRotatedBasisNumerics) {
    const auto cfg = unswept(0.5, 1.0, 1.0, 2.0, kPi / 2);
    // R = exp(-i pi sigma_y / 4); evolve in the rotated basis and map back.
    Eigen::Matrix2cd r;
    const double h = 1.0 / std::sqrt(2.0);
    r << h, -h, h, h;
    const auto rotated_field = [&](double t) {
        const Eigen::Matrix2cd hr = r.adjoint() * hamiltonian(t, cfg) * r;
        return FieldVector{2.0 * hr(1, 0).real(), 2.0 * hr(1, 0).imag(), 2.0 * hr(0, 0).real()};
    };
    const Eigen::Vector2cd psi0 = r.adjoint() * Eigen::Vector2cd(1.0, 0.0);
    const auto s = make_settings(1e-12, 1.0);
    for (double tf : {kPi / 8, kPi / 4, 1.3, 2.7}) {
        const SpinState rot = evolve_tdse_field(rotated_field, SpinState{psi0(0), psi0(1)}, 0.0, tf, s);
        const Eigen::Vector2cd back = r * Eigen::Vector2cd(rot.c_up, rot.c_dn);
        const SpinState direct = evolve_tdse_field(drive_field(cfg), SpinState{}, 0.0, tf, s);
        const auto p = inverse_lz_case(cfg, tf);
        EXPECT_NEAR(p.p_dn, std::norm(back(1)), 1e-4) << tf;
        EXPECT_NEAR(p.p_dn, populations(direct).p_dn, 1e-4) << tf;
    }
}

TEST(InverseLz, RejectsUnsupportedConfigurations) {
    EXPECT_THROW(inverse_lz_case(unswept(0.5, 1, 1, 1, kPi / 2), 1.0), UnsupportedConfigurationError);
    EXPECT_THROW(inverse_lz_case(unswept(0.5, 1, 1, 2, 0.0), 1.0), UnsupportedConfigurationError);
    EXPECT_THROW(inverse_lz_case(unswept(0.5, 1, 0, 2, kPi / 2), 1.0), UnsupportedConfigurationError);
    EXPECT_THROW(inverse_lz_case(make(0, 0, 0.5, 1, 1, 2, kPi / 2), 1.0), UnsupportedConfigurationError);
}
