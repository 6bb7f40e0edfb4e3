#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lzsm/error.hpp"
#include "lzsm/model.hpp"

namespace lzsm {

using cplx = std::complex<double>;

struct SpinState {
    cplx c_up{1.0, 0.0};
    cplx c_dn{0.0, 0.0};
    double norm2() const noexcept { return std::norm(c_up) + std::norm(c_dn); }
};

struct BlochVector {
    double ux = 0.0;
    double uy = 0.0;
    double uz = 1.0;
    double norm() const noexcept { return std::sqrt(ux * ux + uy * uy + uz * uz); }
};

struct IntegratorSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double stride = 0.25;
    double norm_tol = 1e-9;
};

template <class Payload>
struct Sample {
    double tau;
    Payload state;
};

template <class Payload>
struct Trajectory {
    std::vector<Sample<Payload>> samples;
    DriveConfig cfg;
    IntegratorSettings settings;

    const Payload& final_state() const { return samples.back().state; }
    double final_tau() const { return samples.back().tau; }
};

inline constexpr double kMinTol = 1e-13;
inline constexpr double kMaxTol = 1e-6;

inline IntegratorSettings make_settings(double tol, double stride) {
    if (!(tol >= kMinTol && tol <= kMaxTol))
        throw ValidationError("integrator tolerance must lie in [1e-13, 1e-6]");
    if (!(stride > 0.0) || !std::isfinite(stride)) throw ValidationError("sample stride must be > 0");
    IntegratorSettings s;
    s.rel_tol = tol;
    s.abs_tol = std::min(1e-12, tol * 1e-2);
    s.stride = stride;
    return s;
}

// Bloch vector of a pure state: u = (2 Re rho_12, 2 Im rho_21, rho_11 - rho_22).
inline BlochVector to_bloch(const SpinState& s) {
    const cplx rho21 = s.c_dn * std::conj(s.c_up);
    return {2.0 * rho21.real(), 2.0 * rho21.imag(), std::norm(s.c_up) - std::norm(s.c_dn)};
}

struct Populations {
    double p_up;
    double p_dn;
};

// Normalized by the state norm so integrator rounding never pushes a population past 1.
inline Populations populations(const SpinState& s) {
    const double up = std::norm(s.c_up), dn = std::norm(s.c_dn), n = up + dn;
    if (!(n > 0.0)) return {up, dn};
    return {up / n, dn / n};
}
inline Populations populations(const BlochVector& u) { return {0.5 * (1.0 + u.uz), 0.5 * (1.0 - u.uz)}; }

struct BlochAngles {
    double theta_az;   // polar angle from +z, in [0, pi]
    double theta_pol;  // azimuth in the xy plane, in [0, 2 pi)
};

inline BlochAngles bloch_angles(const BlochVector& u) {
    const double r = u.norm();
    if (!(r > 0.0)) throw DomainError("bloch_angles: zero Bloch vector");
    const double c = std::clamp(u.uz / r, -1.0, 1.0);
    const double az = std::acos(c);
    double pol = 0.0;
    if (u.ux != 0.0 || u.uy != 0.0) {
        pol = std::atan2(u.uy, u.ux);
        if (pol < 0.0) pol += 2.0 * std::numbers::pi;
        if (pol >= 2.0 * std::numbers::pi) pol = 0.0;
    }
    return {az, pol};
}

namespace detail {

using TdseVec = Eigen::Vector2cd;
using BlochVec = Eigen::Vector3d;

inline TdseVec pack(const SpinState& s) { return TdseVec(s.c_up, s.c_dn); }
inline SpinState unpack(const TdseVec& y) { return {y(0), y(1)}; }
inline BlochVec pack(const BlochVector& u) { return BlochVec(u.ux, u.uy, u.uz); }
inline BlochVector unpack(const BlochVec& y) { return {y(0), y(1), y(2)}; }

inline double invariant(const TdseVec& y) { return y.squaredNorm(); }
inline double invariant(const BlochVec& y) { return y.norm(); }

// Generator of i dpsi/dtau = (b . sigma)/2 psi, i.e. dpsi/dtau = G psi.
template <class Field>
struct TdseGenerator {
    Field field;
    Eigen::Matrix2cd operator()(double tau) const {
        const FieldVector b = field(tau);
        Eigen::Matrix2cd g;
        g << cplx(0.0, -0.5 * b.bz), cplx(-0.5 * b.by, -0.5 * b.bx),
             cplx(0.5 * b.by, -0.5 * b.bx), cplx(0.0, 0.5 * b.bz);
        return g;
    }
};

// Generator of du/dtau = b x u.
template <class Field>
struct BlochGenerator {
    Field field;
    Eigen::Matrix3d operator()(double tau) const {
        const FieldVector b = field(tau);
        Eigen::Matrix3d g;
        g << 0.0, -b.bz, b.by,
             b.bz, 0.0, -b.bx,
             -b.by, b.bx, 0.0;
        return g;
    }
};

// One step of 3-stage Gauss-Legendre collocation (order 6) for the linear system
// y' = G(t) y, returned as the step propagator. The method conserves quadratic
// invariants, so |psi|^2 and |u| are preserved up to rounding.
template <class Gen>
auto gauss_legendre_propagator(const Gen& gen, double t, double h) {
    using Mat = decltype(gen(t));
    using Scalar = typename Mat::Scalar;
    constexpr int N = Mat::RowsAtCompileTime;
    const double r = std::sqrt(15.0);
    const double c[3] = {0.5 - r / 10.0, 0.5, 0.5 + r / 10.0};
    const double a[3][3] = {{5.0 / 36.0, 2.0 / 9.0 - r / 15.0, 5.0 / 36.0 - r / 30.0},
                            {5.0 / 36.0 + r / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r / 24.0},
                            {5.0 / 36.0 + r / 30.0, 2.0 / 9.0 + r / 15.0, 5.0 / 36.0}};
    const double b[3] = {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0};
    Mat g[3];
    for (int i = 0; i < 3; ++i) g[i] = gen(t + c[i] * h);
    // Stage slopes K_i solve K_i - h sum_j a_ij G_i K_j = G_i.
    Eigen::Matrix<Scalar, 3 * N, 3 * N> m = Eigen::Matrix<Scalar, 3 * N, 3 * N>::Identity();
    Eigen::Matrix<Scalar, 3 * N, N> rhs;
    for (int i = 0; i < 3; ++i) {
        rhs.template block<N, N>(i * N, 0) = g[i];
        for (int j = 0; j < 3; ++j) m.template block<N, N>(i * N, j * N) -= (h * a[i][j]) * g[i];
    }
    const Eigen::Matrix<Scalar, 3 * N, N> k = m.partialPivLu().solve(rhs);
    Mat p = Mat::Identity();
    for (int i = 0; i < 3; ++i) p += (h * b[i]) * k.template block<N, N>(i * N, 0);
    return p;
}

// Adaptive integration from t0 to t1 (either direction) with step-doubling error
// control, invoking on_sample(tau, state) at t0, every stride, and at t1.
template <class State, class Gen, class OnSample>
State run(const Gen& gen, State y, double t0, double t1, const IntegratorSettings& s, OnSample on_sample) {
    constexpr double kOrder = 6.0;
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    const double ref = invariant(y);
    double t = t0;
    double dt = dir * std::min(0.01, std::max(span, 1e-300));
    on_sample(t, y);
    if (span == 0.0) return y;
    const long n_strides = static_cast<long>(std::floor(span / s.stride + 1e-12));
    long k = 1;
    while (true) {
        double target = (k <= n_strides) ? t0 + dir * double(k) * s.stride : t1;
        if (dir * (target - t1) > 0.0 || std::abs(target - t1) < 1e-12 * std::max(1.0, std::abs(t1))) target = t1;
        while (t != target) {
            const double remaining = target - t;
            const bool clipped = std::abs(dt) >= std::abs(remaining);
            const double h = clipped ? remaining : dt;
            const State full = gauss_legendre_propagator(gen, t, h) * y;
            const State half = gauss_legendre_propagator(gen, t + 0.5 * h, 0.5 * h) *
                               (gauss_legendre_propagator(gen, t, 0.5 * h) * y);
            const double err = (full - half).cwiseAbs().maxCoeff() / (std::pow(2.0, kOrder) - 1.0);
            const double scale = s.abs_tol + s.rel_tol * half.cwiseAbs().maxCoeff();
            const bool finite = std::isfinite(err) && half.allFinite();
            const double ratio = err > 0.0 ? scale / err : 1e30;
            const double grow = finite ? std::clamp(0.9 * std::pow(ratio, 1.0 / (kOrder + 1.0)), 0.2, 4.0) : 0.2;
            if (finite && err <= scale) {
                y = half;
                t = clipped ? target : t + h;
                if (!clipped || grow < 1.0) dt = h * grow;
                const double drift = std::abs(invariant(y) - ref);
                if (!(drift <= s.norm_tol)) throw IntegrationFailure("norm drift beyond tolerance", t);
            } else {
                dt = h * grow;
                if (std::abs(dt) < 1e-13 * std::max(1.0, std::abs(t)))
                    throw IntegrationFailure("step-size underflow", t);
            }
        }
        on_sample(t, y);
        if (t == t1) break;
        ++k;
    }
    return y;
}

}  // namespace detail

// Schrodinger propagation in a general field tau -> FieldVector.
template <class Field>
Trajectory<SpinState> propagate_tdse_field(Field field, const SpinState& psi0, double tau_start,
                                           double tau_end, const IntegratorSettings& s) {
    if (!(tau_start < tau_end)) throw ValidationError("propagate: tau_start must be < tau_end");
    if (std::abs(psi0.norm2() - 1.0) > 1e-9) throw ValidationError("propagate: initial state not normalized");
    Trajectory<SpinState> tr;
    tr.settings = s;
    detail::run(detail::TdseGenerator<Field>{field}, detail::pack(psi0), tau_start, tau_end, s,
                [&](double t, const detail::TdseVec& y) { tr.samples.push_back({t, detail::unpack(y)}); });
    return tr;
}

template <class Field>
Trajectory<BlochVector> propagate_bloch_field(Field field, const BlochVector& u0, double tau_start,
                                              double tau_end, const IntegratorSettings& s) {
    if (!(tau_start < tau_end)) throw ValidationError("propagate: tau_start must be < tau_end");
    if (u0.norm() > 1.0 + 1e-9) throw ValidationError("propagate: |u0| must be <= 1");
    Trajectory<BlochVector> tr;
    tr.settings = s;
    detail::run(detail::BlochGenerator<Field>{field}, detail::pack(u0), tau_start, tau_end, s,
                [&](double t, const detail::BlochVec& y) { tr.samples.push_back({t, detail::unpack(y)}); });
    return tr;
}

// Final state only; t1 may precede t0 (backward propagation).
template <class Field>
SpinState evolve_tdse_field(Field field, const SpinState& psi0, double t0, double t1, const IntegratorSettings& s) {
    IntegratorSettings big = s;
    big.stride = std::max(std::abs(t1 - t0), 1e-300);
    return detail::unpack(detail::run(detail::TdseGenerator<Field>{field}, detail::pack(psi0), t0, t1, big,
                                      [](double, const detail::TdseVec&) {}));
}

inline auto drive_field(const DriveConfig& cfg) {
    return [cfg](double tau) { return field_vector(tau, cfg); };
}

inline Trajectory<SpinState> propagate_tdse(const DriveConfig& cfg, const SpinState& psi0, double tau_start,
                                            double tau_end, double tol = 1e-10, double sample_stride = 0.25) {
    auto tr = propagate_tdse_field(drive_field(cfg), psi0, tau_start, tau_end, make_settings(tol, sample_stride));
    tr.cfg = cfg;
    return tr;
}

inline Trajectory<BlochVector> propagate_bloch(const DriveConfig& cfg, const BlochVector& u0, double tau_start,
                                               double tau_end, double tol = 1e-10, double sample_stride = 0.25) {
    auto tr = propagate_bloch_field(drive_field(cfg), u0, tau_start, tau_end, make_settings(tol, sample_stride));
    tr.cfg = cfg;
    return tr;
}

}  // namespace lzsm
