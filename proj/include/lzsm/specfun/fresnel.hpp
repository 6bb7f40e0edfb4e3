#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <utility>

#include "lzsm/error.hpp"
#include "lzsm/specfun/extreal.hpp"

namespace lzsm::specfun {

struct FresnelPair {
    double c;
    double s;
};

namespace detail {

// cos and sin of pi*x^2/2 with x^2 split exactly and reduced mod 4 without rounding.
inline std::pair<double, double> half_pi_square_phase(double x) {
    const double hi = x * x;
    const double lo = std::fma(x, x, -hi);
    const double r = std::fmod(hi, 4.0) + lo;
    const double t = 0.5 * std::numbers::pi * r;
    return {std::cos(t), std::sin(t)};
}

inline FresnelPair fresnel_series(double ax) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double fact = 0.5 * std::numbers::pi * ax * ax;
    double sum = 0.0, sums = 0.0, sumc = ax, sign = 1.0, term = ax;
    bool odd = true;
    int n = 3;
    for (int k = 1; k < 200; ++k) {
        term *= fact / k;
        sum += sign * term / n;
        const double test = std::abs(sum) * eps;
        if (odd) {
            sign = -sign;
            sums = sum;
            sum = sumc;
        } else {
            sumc = sum;
            sum = sums;
        }
        if (term < test) break;
        odd = !odd;
        n += 2;
    }
    return {sumc, sums};
}

// Lentz evaluation of the continued fraction for the complementary Fresnel integral.
inline FresnelPair fresnel_cf(double ax) {
    using c = std::complex<double>;
    const double eps = std::numeric_limits<double>::epsilon();
    const double tiny = 1.0e-300;
    const double pix2 = std::numbers::pi * ax * ax;
    c b(1.0, -pix2);
    c cc = 1.0 / tiny;
    c d = 1.0 / b;
    c h = d;
    int n = -1;
    for (int k = 2; k < 100000; ++k) {
        n += 2;
        const double a = -double(n) * double(n + 1);
        b += 4.0;
        d = 1.0 / (a * d + b);
        cc = b + a / cc;
        const c del = cc * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps) break;
    }
    h *= c(ax, -ax);
    const auto [cs, sn] = half_pi_square_phase(ax);
    const c r = c(0.5, 0.5) * (1.0 - c(cs, sn) * h);
    return {r.real(), r.imag()};
}

}  // namespace detail

// C(x) = int_0^x cos(pi t^2/2) dt, S(x) = int_0^x sin(pi t^2/2) dt.
inline FresnelPair fresnel(double x) {
    if (std::isnan(x)) throw DomainError("fresnel: NaN argument");
    const double ax = std::abs(x);
    FresnelPair r;
    if (ax < 1.0e-100) {
        r = {ax, 0.0};
    } else if (ax <= 1.5) {
        r = detail::fresnel_series(ax);
    } else if (ax < 1.0e150) {
        r = detail::fresnel_cf(ax);
    } else {
        r = {0.5, 0.5};
    }
    if (x < 0.0) r = {-r.c, -r.s};
    return r;
}

struct ScaledFresnel {
    double c;  // 1/2 + C(x/sqrt(pi))
    double s;  // 1/2 + S(x/sqrt(pi))
};

inline ScaledFresnel scaled_fresnel(ExtReal x) {
    switch (x.kind()) {
        case ExtReal::Kind::neg_inf: return {0.0, 0.0};
        case ExtReal::Kind::pos_inf: return {1.0, 1.0};
        default: break;
    }
    const FresnelPair f = fresnel(x.value() / std::sqrt(std::numbers::pi));
    return {0.5 + f.c, 0.5 + f.s};
}

}  // namespace lzsm::specfun
