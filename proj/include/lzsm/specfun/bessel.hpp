#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "lzsm/error.hpp"

namespace lzsm::specfun {

inline constexpr int kBesselMaxOrder = 10000;
inline constexpr double kBesselMaxArgument = 1.0e5;

namespace detail {

// J_0..J_{n_max}(x) for 0 < x < 1e-5 from the leading terms of the power series.
inline std::vector<double> bessel_j_small(int n_max, double x) {
    std::vector<double> out(std::size_t(n_max) + 1, 0.0);
    const double h = 0.5 * x;
    const double h2 = h * h;
    double lead = 1.0;  // (x/2)^n / n!
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) lead *= h / n;
        if (lead == 0.0) break;
        double sum = 1.0, term = 1.0;
        for (int k = 1; k <= 3; ++k) {
            term *= -h2 / (double(k) * double(n + k));
            sum += term;
        }
        out[std::size_t(n)] = lead * sum;
    }
    return out;
}

// Miller backward recurrence normalized by 1 = J_0 + 2 sum_k J_{2k}; requires x > 0.
inline std::vector<double> bessel_j_miller(int n_max, double x) {
    const double scale = std::max(double(n_max), x);
    int start = int(std::ceil(scale + 30.0 + 14.0 * std::cbrt(scale)));
    start += start % 2;
    std::vector<double> out(std::size_t(n_max) + 1, 0.0);
    double j_next = 0.0, j_cur = 1.0e-30, norm = 0.0;
    const double big = 1.0e250;
    for (int k = start; k > 0; --k) {
        const double j_prev = 2.0 * k / x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        if (k - 1 <= n_max) out[std::size_t(k - 1)] = j_cur;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j_cur;
        if (std::abs(j_cur) > big) {
            j_cur /= big;
            j_next /= big;
            norm /= big;
            for (int i = k - 1; i <= n_max; ++i) out[std::size_t(i)] /= big;
        }
    }
    norm += j_cur;
    if (!std::isfinite(norm) || norm == 0.0)
        throw AccuracyError("bessel_j: recurrence normalization failed");
    for (auto& v : out) v /= norm;
    return out;
}

}  // namespace detail

// J_0(x) .. J_{n_max}(x) for any finite real x.
inline std::vector<double> bessel_j_range(int n_max, double x) {
    if (n_max < 0 || n_max > kBesselMaxOrder) throw DomainError("bessel_j_range: order out of range");
    if (!std::isfinite(x)) throw DomainError("bessel_j_range: non-finite argument");
    const double ax = std::abs(x);
    if (ax > kBesselMaxArgument) throw AccuracyError("bessel_j_range: argument beyond recurrence range");
    std::vector<double> out;
    if (ax == 0.0) {
        out.assign(std::size_t(n_max) + 1, 0.0);
        out[0] = 1.0;
        return out;
    }
    out = ax < 1.0e-5 ? detail::bessel_j_small(n_max, ax) : detail::bessel_j_miller(n_max, ax);
    if (x < 0.0)
        for (int n = 1; n <= n_max; n += 2) out[std::size_t(n)] = -out[std::size_t(n)];
    return out;
}

inline double bessel_j(int n, double x) {
    if (std::abs(n) > kBesselMaxOrder) throw DomainError("bessel_j: |n| exceeds 10^4");
    const int m = std::abs(n);
    const double v = bessel_j_range(m, x)[std::size_t(m)];
    return (n < 0 && m % 2 == 1) ? -v : v;
}

// J_n(x) for n in [-n_max, n_max], indexed by n.
class BesselTable {
public:
    BesselTable(int n_max, double x) : n_max_(n_max), values_(bessel_j_range(n_max, x)) {}
    int n_max() const noexcept { return n_max_; }
    double operator()(int n) const {
        const int m = std::abs(n);
        if (m > n_max_) throw DomainError("BesselTable: order outside table");
        const double v = values_[std::size_t(m)];
        return (n < 0 && m % 2 == 1) ? -v : v;
    }

private:
    int n_max_;
    std::vector<double> values_;
};

}  // namespace lzsm::specfun
