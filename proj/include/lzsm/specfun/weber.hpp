#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

#include "lzsm/error.hpp"
#include "lzsm/specfun/gamma.hpp"

namespace lzsm::specfun {

// Parabolic-cylinder function D_nu(z), solution of y'' = (z^2/4 - nu - 1/2) y
// recessive along the positive real axis.
//
// Strategy:
//  * |z| <= kWeberSeriesRadius: Maclaurin series in long double, accepted when the
//    estimated cancellation loss stays below kWeberAcceptRelErr.
//  * |z| >  kWeberSeriesRadius: large-|z| expansion (single series for |arg z| <= pi/2,
//    Stokes-completed pair beyond), accepted when the smallest term is small enough.
//  * otherwise Taylor continuation of the ODE along the ray through z: inward from the
//    asymptotic radius inside |arg z| < pi/4 (where D is recessive and inward
//    integration is stable), outward from the series disk elsewhere.
inline constexpr double kWeberSeriesRadius = 8.0;
inline constexpr double kWeberMaxAbsZ = 60.0;
inline constexpr double kWeberMaxAbsImNu = 50.0;
inline constexpr double kWeberAcceptRelErr = 1.0e-12;

namespace detail {

using ldouble = long double;
using lcplx = std::complex<long double>;

struct WeberValue {
    lcplx d;   // D_nu(z)
    lcplx dp;  // D'_nu(z)
};

inline lcplx to_l(cplx z) { return {ldouble(z.real()), ldouble(z.imag())}; }

inline constexpr ldouble kLdEps = LDBL_EPSILON;

struct SeriesResult {
    WeberValue value;
    double rel_err;
};

inline SeriesResult weber_series(cplx nu, cplx z) {
    const ldouble sqrt_pi = std::sqrt(std::numbers::pi_v<ldouble>);
    const lcplx lnu = to_l(nu);
    const lcplx y0 = std::pow(lcplx(2.0L), lnu / 2.0L) * sqrt_pi * to_l(rgamma((1.0 - nu) / 2.0));
    const lcplx y1 =
        -std::pow(lcplx(2.0L), (lnu + 1.0L) / 2.0L) * sqrt_pi * to_l(rgamma(-nu / 2.0));
    const lcplx lz = to_l(z);
    if (z == cplx(0.0)) return {{y0, y1}, 0.0};
    const lcplx a = -lnu - 0.5L;
    const lcplx z2 = lz * lz;
    const lcplx z4 = z2 * z2;
    // t_k = c_k z^k with (k+1)(k+2) c_{k+2} = a c_k + c_{k-2}/4
    lcplx tm2 = 0.0L, tm1 = 0.0L;      // t_{k-2}, t_{k-1} relative to the current pair
    lcplx t0 = y0, t1 = y1 * lz;       // t_k, t_{k+1}
    lcplx sum = t0 + t1;
    lcplx dsum = t1;                   // sum k t_k, divided by z at the end
    ldouble max_term = std::max(std::abs(t0), std::abs(t1));
    int quiet = 0;
    int k = 0;
    for (; k < 4000; k += 2) {
        const lcplx t2 = (a * z2 * t0 + z4 * tm2 / 4.0L) / ldouble((k + 1) * (k + 2));
        const lcplx t3 = (a * z2 * t1 + z4 * tm1 / 4.0L) / ldouble((k + 2) * (k + 3));
        sum += t2 + t3;
        dsum += ldouble(k + 2) * t2 + ldouble(k + 3) * t3;
        const ldouble mag = std::max(std::abs(t2), std::abs(t3));
        max_term = std::max(max_term, mag);
        tm2 = t0;
        tm1 = t1;
        t0 = t2;
        t1 = t3;
        if (mag <= kLdEps * 1.0e-3L * max_term) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
    }
    if (k >= 4000) return {{sum, dsum / lz}, HUGE_VAL};
    const ldouble scale = std::abs(sum);
    const double rel = scale > 0.0L ? double(max_term * kLdEps * 64.0L / scale) : HUGE_VAL;
    return {{sum, dsum / lz}, rel};
}

// Asymptotic expansion; returns nullopt when the series does not converge far enough.
inline std::optional<WeberValue> weber_asymptotic(cplx nu, cplx z) {
    const lcplx lnu = to_l(nu);
    const lcplx lz = to_l(z);
    const lcplx inv_z2 = 1.0L / (lz * lz);
    const ldouble tol = 1.0e-15L;

    // S = sum_k s_k with s_k = -s_{k-1} (2k-2-nu)(2k-1-nu) / (2k z^2)
    auto sum_series = [&](bool recessive, lcplx& s, lcplx& ds) -> bool {
        lcplx term = 1.0L;
        s = term;
        ds = 0.0L;  // d/dz of the series
        ldouble prev = 1.0L;
        for (int k = 1; k < 400; ++k) {
            lcplx factor;
            if (recessive)
                factor = -(ldouble(2 * k - 2) - lnu) * (ldouble(2 * k - 1) - lnu) / ldouble(2 * k);
            else
                factor = (lnu + ldouble(2 * k - 1)) * (lnu + ldouble(2 * k)) / ldouble(2 * k);
            const lcplx next = term * factor * inv_z2;
            const ldouble mag = std::abs(next);
            if (mag > prev && k > 1) return prev <= tol * std::abs(s);
            term = next;
            s += term;
            ds += -ldouble(2 * k) * term / lz;
            prev = mag;
            if (mag <= kLdEps * 1.0e-2L * std::abs(s)) return true;
        }
        return prev <= tol * std::abs(s);
    };

    lcplx s, ds;
    if (!sum_series(true, s, ds)) return std::nullopt;
    const lcplx log_z = std::log(lz);
    const lcplx env = std::exp(-lz * lz / 4.0L + lnu * log_z);  // e^{-z^2/4} z^nu
    lcplx d = env * s;
    lcplx dp = env * ((-lz / 2.0L + lnu / lz) * s + ds);

    const double ph = std::arg(z);
    if (std::abs(ph) > std::numbers::pi / 2.0) {
        lcplx t, dt;
        if (!sum_series(false, t, dt)) return std::nullopt;
        const ldouble sgn = ph > 0.0 ? 1.0L : -1.0L;
        const ldouble pi = std::numbers::pi_v<ldouble>;
        const lcplx i(0.0L, 1.0L);
        const lcplx coef = -std::sqrt(2.0L * pi) * to_l(rgamma(-nu)) * std::exp(sgn * i * pi * lnu);
        const lcplx env2 = std::exp(lz * lz / 4.0L - (lnu + 1.0L) * log_z);  // e^{z^2/4} z^{-nu-1}
        d += coef * env2 * t;
        dp += coef * env2 * ((lz / 2.0L - (lnu + 1.0L) / lz) * t + dt);
    }
    return WeberValue{d, dp};
}

// One Taylor step of y'' = (z^2/4 + a) y from z0 to z0 + h.
inline WeberValue weber_taylor_step(lcplx z0, const WeberValue& y, lcplx h, lcplx a) {
    const lcplx p0 = z0 * z0 / 4.0L + a;
    const lcplx p1 = z0 / 2.0L;
    const ldouble p2 = 0.25L;
    const lcplx h2 = h * h, h3 = h2 * h, h4 = h2 * h2;
    // e_k = c_k h^k
    lcplx e[4] = {y.d, y.dp * h, 0.0L, 0.0L};  // rolling window e_{k-3..k}
    lcplx val = e[0] + e[1];
    lcplx der = e[1];
    ldouble max_term = std::max(std::abs(e[0]), std::abs(e[1]));
    lcplx em4 = 0.0L, em3 = 0.0L, em2 = e[0], em1 = e[1];
    int quiet = 0;
    for (int k = 2; k < 600; ++k) {
        const lcplx ek = (p0 * h2 * em2 + p1 * h3 * em3 + p2 * h4 * em4) / ldouble(k * (k - 1));
        val += ek;
        der += ldouble(k) * ek;
        const ldouble mag = std::abs(ek);
        max_term = std::max(max_term, mag);
        em4 = em3;
        em3 = em2;
        em2 = em1;
        em1 = ek;
        if (mag <= kLdEps * 1.0e-3L * max_term) {
            if (++quiet >= 4) break;
        } else {
            quiet = 0;
        }
    }
    return {val, der / h};
}

// Continue (z0, y) along the straight segment to z1.
inline WeberValue weber_continue(cplx nu, lcplx z0, WeberValue y, lcplx z1) {
    const lcplx a = -to_l(nu) - 0.5L;
    const ldouble dist = std::abs(z1 - z0);
    if (dist == 0.0L) return y;
    const lcplx dir = (z1 - z0) / dist;
    ldouble travelled = 0.0L;
    lcplx z = z0;
    while (travelled < dist) {
        const ldouble local = std::abs(z) / 2.0L + std::sqrt(std::abs(a)) + 1.0L;
        ldouble step = std::min(1.0L, 1.5L / local);
        if (travelled + step > dist) step = dist - travelled;
        y = weber_taylor_step(z, y, dir * step, a);
        travelled += step;
        z = z0 + dir * travelled;
    }
    return y;
}

inline cplx weber_exact_integer(int n, cplx z) {
    // D_n(z) = exp(-z^2/4) He_n(z)
    lcplx lz = to_l(z);
    lcplx he_prev = 1.0L, he = lz;
    if (n == 0) he = 1.0L;
    for (int k = 1; k < n; ++k) {
        const lcplx next = lz * he - ldouble(k) * he_prev;
        he_prev = he;
        he = next;
    }
    const lcplx r = std::exp(-lz * lz / 4.0L) * he;
    return {double(r.real()), double(r.imag())};
}

inline cplx weber_to_double(lcplx v) {
    const ldouble m = std::abs(v);
    if (!std::isfinite(double(m)) || m > ldouble(DBL_MAX) || (m != 0.0L && m < ldouble(DBL_MIN)))
        throw UnsupportedRegionError("weber_d: value not representable in double precision");
    return {double(v.real()), double(v.imag())};
}

inline WeberValue weber_value(cplx nu, cplx z) {
    const double r = std::abs(z);
    if (r <= kWeberSeriesRadius) {
        const SeriesResult s = weber_series(nu, z);
        if (s.rel_err <= kWeberAcceptRelErr) return s.value;
    } else {
        if (auto v = weber_asymptotic(nu, z)) return *v;
    }
    const lcplx lz = to_l(z);
    const lcplx dir = lz / ldouble(r);
    const bool recessive = z.real() > std::abs(z.imag());
    if (recessive) {
        for (double R = std::max(r, kWeberSeriesRadius) * 1.25; R <= 4.0 * kWeberMaxAbsZ; R *= 1.25) {
            const lcplx zs = dir * ldouble(R);
            if (auto v = weber_asymptotic(nu, cplx(double(zs.real()), double(zs.imag()))))
                return weber_continue(nu, zs, *v, lz);
        }
        throw UnsupportedRegionError("weber_d: asymptotic expansion unavailable for this order");
    }
    for (double rs = std::min(r, 4.0); rs >= 0.25; rs /= 2.0) {
        const lcplx zs = dir * ldouble(rs);
        const SeriesResult s = weber_series(nu, cplx(double(zs.real()), double(zs.imag())));
        if (s.rel_err <= kWeberAcceptRelErr) return weber_continue(nu, zs, s.value, lz);
    }
    const SeriesResult s0 = weber_series(nu, cplx(0.0));
    return weber_continue(nu, 0.0L, s0.value, lz);
}

inline void weber_check_domain(cplx nu, cplx z) {
    if (!std::isfinite(nu.real()) || !std::isfinite(nu.imag()) || !std::isfinite(z.real()) ||
        !std::isfinite(z.imag()))
        throw UnsupportedRegionError("weber_d: non-finite argument");
    if (std::abs(z) > kWeberMaxAbsZ) throw UnsupportedRegionError("weber_d: |z| > 60");
    if (std::abs(nu.imag()) > kWeberMaxAbsImNu) throw UnsupportedRegionError("weber_d: |Im nu| > 50");
    if (std::abs(nu.real()) > kWeberMaxAbsImNu) throw UnsupportedRegionError("weber_d: |Re nu| > 50");
}

}  // namespace detail

inline cplx weber_d(cplx nu, cplx z) {
    detail::weber_check_domain(nu, z);
    if (nu.imag() == 0.0 && nu.real() >= 0.0 && nu.real() == std::floor(nu.real()))
        return detail::weber_exact_integer(int(nu.real()), z);
    return detail::weber_to_double(detail::weber_value(nu, z).d);
}

// D_nu(z) together with its z-derivative.
inline std::pair<cplx, cplx> weber_d_with_derivative(cplx nu, cplx z) {
    detail::weber_check_domain(nu, z);
    const detail::WeberValue v = detail::weber_value(nu, z);
    return {detail::weber_to_double(v.d), detail::weber_to_double(v.dp)};
}

}  // namespace lzsm::specfun
