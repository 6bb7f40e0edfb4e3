#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "lzsm/harness/format.hpp"
#include "lzsm/specfun.hpp"

namespace lzsm::harness {

struct SelftestRow {
    std::string name;
    double value;
    double expected;
    double tol;
    bool pass() const { return std::isfinite(value) && std::abs(value - expected) <= tol; }
};

// Oracle checks of the special-function layer with closed-form expectations.
inline std::vector<SelftestRow> specfun_selftest() {
    using namespace specfun;
    using c = std::complex<double>;
    const double pi = std::numbers::pi;
    std::vector<SelftestRow> rows;
    const auto add = [&](std::string name, const std::function<double()>& f, double expected, double tol) {
        double v;
        try {
            v = f();
        } catch (const std::exception&) {
            v = NAN;
        }
        rows.push_back({std::move(name), v, expected, tol});
    };
    add("bessel_j(0, 0)", [] { return bessel_j(0, 0.0); }, 1.0, 0.0);
    add("bessel_j(3, 0)", [] { return bessel_j(3, 0.0); }, 0.0, 0.0);
    add("bessel_j(0, 2.404826)", [] { return bessel_j(0, 2.404826); }, 0.0, 1e-6);
    add("bessel_j(-5, 7.5) + bessel_j(5, 7.5)", [] { return bessel_j(-5, 7.5) + bessel_j(5, 7.5); }, 0.0, 1e-15);
    add("sum_n J_n(17.3)^2", [] {
        const auto t = bessel_j_range(60, 17.3);
        double s = t[0] * t[0];
        for (std::size_t n = 1; n < t.size(); ++n) s += 2.0 * t[n] * t[n];
        return s;
    }, 1.0, 1e-10);
    add("fresnel(1).c", [] { return fresnel(1.0).c; }, 0.7798934003768228, 1e-10);
    add("fresnel(1).s", [] { return fresnel(1.0).s; }, 0.4382591473903548, 1e-10);
    add("fresnel(1e6).c", [] { return fresnel(1e6).c; }, 0.5, 1e-6);
    add("fresnel(-2.5).s + fresnel(2.5).s", [] { return fresnel(-2.5).s + fresnel(2.5).s; }, 0.0, 0.0);
    add("scaled_fresnel(-inf).c", [] { return scaled_fresnel(ExtReal::neg_inf()).c; }, 0.0, 0.0);
    add("scaled_fresnel(+inf).s", [] { return scaled_fresnel(ExtReal::pos_inf()).s; }, 1.0, 0.0);
    add("scaled_fresnel(0).c", [] { return scaled_fresnel(0.0).c; }, 0.5, 0.0);
    add("|log_gamma(1)|", [] { return std::abs(log_gamma(1.0)); }, 0.0, 1e-14);
    add("|log_gamma(2)|", [] { return std::abs(log_gamma(2.0)); }, 0.0, 1e-14);
    add("|Gamma(1+i)|^2", [&] { return std::norm(gamma(c(1.0, 1.0))); }, pi / std::sinh(pi), 1e-13);
    add("Gamma(z)Gamma(1-z) sin(pi z)/pi - 1", [&] {
        const c z(0.3, 0.7);
        return std::abs(std::exp(log_gamma(z) + log_gamma(1.0 - z)) * std::sin(pi * z) / pi - 1.0);
    }, 0.0, 1e-10);
    add("stokes_phase(0)", [] { return stokes_phase(0.0); }, pi / 4.0, 0.0);
    add("|D_0(1+2i) - exp(-z^2/4)|", [] {
        const c z(1.0, 2.0);
        return std::abs(weber_d(0.0, z) - std::exp(-z * z / 4.0));
    }, 0.0, 1e-12);
    add("|D_1(0.5-0.3i) - z exp(-z^2/4)|", [] {
        const c z(0.5, -0.3);
        return std::abs(weber_d(1.0, z) - z * std::exp(-z * z / 4.0));
    }, 0.0, 1e-12);
    add("|D_{-0.3i}(0) - 2^{nu/2} sqrt(pi)/Gamma((1-nu)/2)|", [&] {
        const c nu(0.0, -0.3);
        const c ref = std::pow(c(2.0), nu / 2.0) * std::sqrt(pi) / gamma((1.0 - nu) / 2.0);
        return std::abs(weber_d(nu, 0.0) - ref) / std::abs(ref);
    }, 0.0, 1e-10);
    add("Weber recurrence residual (nu=-0.4i, z=6e^{-i pi/4})", [] {
        const c nu(0.0, -0.4), z = 6.0 * std::polar(1.0, -std::numbers::pi / 4.0);
        const c d = weber_d(nu, z);
        return std::abs(weber_d(nu + 1.0, z) - z * d + nu * weber_d(nu - 1.0, z)) / std::abs(d);
    }, 0.0, 1e-7);
    add("Weber switch continuity at |z|=8", [] {
        const c nu(0.0, -0.7);
        const c a = weber_d(nu, std::polar(8.0 * (1.0 - 1e-12), 2.0));
        const c b = weber_d(nu, std::polar(8.0 * (1.0 + 1e-12), 2.0));
        return std::abs(a - b) / std::abs(a);
    }, 0.0, 1e-7);
    return rows;
}

inline bool print_selftest(const std::vector<SelftestRow>& rows, std::ostream& out) {
    bool all = true;
    char line[512];
    std::snprintf(line, sizeof line, "%-55s %-24s %-24s %-10s %s\n", "check", "value", "expected", "tol", "result");
    out << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-55s %-24s %-24s %-10.1e %s\n", r.name.c_str(),
                      format_double(r.value).c_str(), format_double(r.expected).c_str(), r.tol,
                      r.pass() ? "PASS" : "FAIL");
        out << line;
        all = all && r.pass();
    }
    out << (all ? "selftest: all checks passed\n" : "selftest: FAILURES present\n");
    return all;
}

}  // namespace lzsm::harness
