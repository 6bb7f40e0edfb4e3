#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "lzsm/error.hpp"

namespace lzsm::specfun {

using cplx = std::complex<double>;

namespace detail {

// Godfrey's g=7, n=9 Lanczos coefficients.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// Valid for Re z >= 1/2.
inline cplx lanczos_log_gamma(cplx z) {
    z -= 1.0;
    cplx x = kLanczosCoef[0];
    for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) x += kLanczosCoef[i] / (z + double(i));
    const cplx t = z + kLanczosG + 0.5;
    const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    return half_log_2pi + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace detail

// Log-gamma on the branch that is continuous off the negative real axis
// (imaginary part equals the accumulated argument, not reduced mod 2*pi).
inline cplx log_gamma(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("log_gamma: non-finite argument");
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw PoleError("log_gamma: pole at non-positive integer");
    if (z.real() >= 0.5) return detail::lanczos_log_gamma(z);
    const int shift = static_cast<int>(std::ceil(0.5 - z.real()));
    cplx acc = 0.0;
    for (int k = 0; k < shift; ++k) acc += std::log(z + double(k));
    return detail::lanczos_log_gamma(z + double(shift)) - acc;
}

inline cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

// 1/Gamma(z); zero at the poles.
inline cplx rgamma(cplx z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) return 0.0;
    return std::exp(-log_gamma(z));
}

// chi(delta) = pi/4 + Im log Gamma(1 - i delta) + delta (log delta - 1).
inline double stokes_phase(double delta) {
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw DomainError("stokes_phase: delta must be finite and >= 0");
    const double quarter_pi = std::numbers::pi / 4.0;
    if (delta == 0.0) return quarter_pi;
    return quarter_pi + log_gamma(cplx(1.0, -delta)).imag() + delta * (std::log(delta) - 1.0);
}

}  // namespace lzsm::specfun
