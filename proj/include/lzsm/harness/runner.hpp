#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "lzsm/analytic.hpp"
#include "lzsm/blochpert.hpp"
#include "lzsm/harness/config.hpp"
#include "lzsm/harness/format.hpp"
#include "lzsm/integrate.hpp"

namespace lzsm::harness {

inline constexpr const char* kTraceHeader = "tau,p_up,p_dn,ux,uy,uz";

// Schrodinger trajectory from |up> exported as tau,p_up,p_dn,ux,uy,uz.
inline void run_trace(const RunSpec& spec, std::ostream& out) {
    const auto tr = propagate_tdse(spec.cfg, SpinState{}, spec.tau_start, spec.tau_end, spec.tol, spec.stride);
    out << kTraceHeader << '\n';
    for (const auto& s : tr.samples) {
        const Populations p = populations(s.state);
        const BlochVector u = to_bloch(s.state);
        out << format_double(s.tau) << ',' << format_double(p.p_up) << ',' << format_double(p.p_dn) << ','
            << format_double(u.ux) << ',' << format_double(u.uy) << ',' << format_double(u.uz) << '\n';
    }
}

inline double evaluate_observable(const RunSpec& spec, Observable obs) {
    switch (obs) {
        case Observable::p_up_final:
        case Observable::p_dn_final: {
            const SpinState s = evolve_tdse_field(drive_field(spec.cfg), SpinState{}, spec.tau_start, spec.tau_end,
                                                  make_settings(spec.tol, spec.stride));
            const Populations p = populations(s);
            return obs == Observable::p_up_final ? p.p_up : p.p_dn;
        }
        case Observable::uz_final: {
            const auto tr = propagate_bloch(spec.cfg, BlochVector{}, spec.tau_start, spec.tau_end, spec.tol,
                                            spec.tau_end - spec.tau_start);
            return tr.final_state().uz;
        }
        default: return strong_drive_delta(spec.cfg);
    }
}

struct SweepCell {
    double x1 = 0.0;
    double x2 = 0.0;
    bool ok = false;
    double value = 0.0;
};

// Evaluate the grid with `workers` threads; cells are pre-indexed so the output
// order and bytes do not depend on scheduling.
inline std::vector<SweepCell> compute_sweep(const RunSpec& spec, const SweepSpec& sweep, int workers) {
    if (workers < 1) throw ValidationError("sweep: workers must be >= 1");
    const int n1 = sweep.axis1.steps;
    const int n2 = sweep.axis2 ? sweep.axis2->steps : 1;
    std::vector<SweepCell> cells(std::size_t(n1) * std::size_t(n2));
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            auto& c = cells[std::size_t(i) * std::size_t(n2) + std::size_t(j)];
            c.x1 = sweep.axis1.value(i);
            c.x2 = sweep.axis2 ? sweep.axis2->value(j) : 0.0;
        }
    std::atomic<std::size_t> next{0};
    const auto work = [&]() {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= cells.size()) return;
            SweepCell& c = cells[k];
            try {
                RunSpec cell = spec;
                drive_field_ref(cell.params, sweep.axis1.field) = c.x1;
                if (sweep.axis2) drive_field_ref(cell.params, sweep.axis2->field) = c.x2;
                cell.cfg = DriveConfig::from_any(cell.params);
                c.value = evaluate_observable(cell, sweep.observable);
                c.ok = std::isfinite(c.value);
            } catch (const std::exception&) {
                c.ok = false;
            }
        }
    };
    const int n_threads = std::max(1, std::min<int>(workers, int(cells.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    return cells;
}

inline void write_sweep(const SweepSpec& sweep, const std::vector<SweepCell>& cells, std::ostream& out) {
    out << sweep.axis1.field;
    if (sweep.axis2) out << ',' << sweep.axis2->field;
    out << ',' << observable_name(sweep.observable) << '\n';
    for (const auto& c : cells) {
        out << format_double(c.x1);
        if (sweep.axis2) out << ',' << format_double(c.x2);
        out << ',' << (c.ok ? format_double(c.value) : std::string("error")) << '\n';
    }
}

inline void run_sweep(const RunSpec& spec, const SweepSpec& sweep, int workers, std::ostream& out) {
    write_sweep(sweep, compute_sweep(spec, sweep, workers), out);
}

enum class CompareMethod { strong_drive, weak_drive, bloch_pert, bloch_pert_uz, rabi, inverse_lz };

inline CompareMethod parse_method(const std::string& m) {
    if (m == "strong_drive") return CompareMethod::strong_drive;
    if (m == "weak_drive") return CompareMethod::weak_drive;
    if (m == "bloch_pert") return CompareMethod::bloch_pert;
    if (m == "bloch_pert_uz") return CompareMethod::bloch_pert_uz;
    if (m == "rabi") return CompareMethod::rabi;
    if (m == "inverse_lz") return CompareMethod::inverse_lz;
    throw ValidationError("compare: unknown method '" + m + "'");
}

inline std::string method_name(CompareMethod m) {
    switch (m) {
        case CompareMethod::strong_drive: return "strong_drive";
        case CompareMethod::weak_drive: return "weak_drive";
        case CompareMethod::bloch_pert: return "bloch_pert";
        case CompareMethod::bloch_pert_uz: return "bloch_pert_uz";
        case CompareMethod::rabi: return "rabi";
        default: return "inverse_lz";
    }
}

struct CompareSample {
    double tau;
    std::string quantity;
    double analytic;
    double numeric;
    double dev() const { return std::abs(analytic - numeric); }
};

struct CompareReport {
    std::string method;
    double threshold = 0.0;
    std::vector<CompareSample> samples;
    double max_abs_dev = 0.0;
    double rms_dev = 0.0;
    bool pass = true;
    std::vector<std::string> warnings;

    void finalize() {
        double sq = 0.0;
        max_abs_dev = 0.0;
        for (const auto& s : samples) {
            max_abs_dev = std::max(max_abs_dev, s.dev());
            sq += s.dev() * s.dev();
        }
        rms_dev = samples.empty() ? 0.0 : std::sqrt(sq / double(samples.size()));
        rms_dev = std::min(rms_dev, max_abs_dev);
        pass = max_abs_dev <= threshold;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["method"] = method;
        j["threshold"] = threshold;
        j["max_abs_dev"] = max_abs_dev;
        j["rms_dev"] = rms_dev;
        j["pass"] = pass;
        j["warnings"] = warnings;
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& s : samples)
            arr.push_back({{"tau", s.tau},
                           {"quantity", s.quantity},
                           {"analytic", s.analytic},
                           {"numeric", s.numeric},
                           {"dev", s.dev()}});
        j["samples"] = arr;
        return j;
    }
};

namespace detail {

// Times for the zero-field cases, measured from t = 0 up to the window end.
inline void require_positive_end(const RunSpec& spec, const char* who) {
    if (!(spec.tau_end > 0.0))
        throw ValidationError(std::string(who) + ": window end must be > 0 (evolution starts at t = 0)");
}

}  // namespace detail

inline CompareReport run_compare(const RunSpec& spec, CompareMethod method, double threshold) {
    if (!(threshold >= 0.0) || !std::isfinite(threshold)) throw ValidationError("compare: threshold must be >= 0");
    CompareReport rep;
    rep.method = method_name(method);
    rep.threshold = threshold;
    switch (method) {
        case CompareMethod::strong_drive:
        case CompareMethod::weak_drive: {
            if (!spec.cfg.is_swept()) throw UnsupportedConfigurationError("compare: method requires v > 0");
            double analytic = 0.0;
            if (method == CompareMethod::strong_drive) {
                analytic = strong_drive_survival(spec.cfg);
                if (std::abs(spec.cfg.eps0()) > 0.5 * spec.cfg.freq_rf())
                    rep.warnings.push_back("|eps0| > omega/2: strong-drive formula loses accuracy at large detuning");
            } else {
                analytic = weak_drive_probabilities(spec.cfg).p_up;
            }
            const SpinState s = evolve_tdse_field(drive_field(spec.cfg), SpinState{}, spec.tau_start, spec.tau_end,
                                                  make_settings(spec.tol, spec.stride));
            rep.samples.push_back({spec.tau_end, "p_up", analytic, populations(s).p_up});
            break;
        }
        case CompareMethod::bloch_pert:
        case CompareMethod::bloch_pert_uz: {
            if (!spec.cfg.is_swept()) throw UnsupportedConfigurationError("compare: method requires v > 0");
            const PerturbativeBloch pert(spec.cfg, spec.trunc);
            const auto tr = propagate_bloch(spec.cfg, BlochVector{}, spec.tau_start, spec.tau_end, spec.tol, spec.stride);
            for (const auto& s : tr.samples) {
                const BlochVector a = pert.evaluate(s.tau);
                rep.samples.push_back({s.tau, "uz", a.uz, s.state.uz});
                if (method == CompareMethod::bloch_pert_uz) continue;
                rep.samples.push_back({s.tau, "ux", a.ux, s.state.ux});
                rep.samples.push_back({s.tau, "uy", a.uy, s.state.uy});
            }
            break;
        }
        case CompareMethod::rabi:
        case CompareMethod::inverse_lz: {
            detail::require_positive_end(spec, rep.method.c_str());
            // Validate the analytic preconditions before integrating.
            if (method == CompareMethod::rabi) rabi_case(spec.cfg, 0.0);
            else inverse_lz_case(spec.cfg, 0.0);
            const auto tr = propagate_tdse(spec.cfg, SpinState{}, 0.0, spec.tau_end, spec.tol, spec.stride);
            for (const auto& s : tr.samples) {
                const Populations a =
                    method == CompareMethod::rabi ? rabi_case(spec.cfg, s.tau) : inverse_lz_case(spec.cfg, s.tau);
                rep.samples.push_back({s.tau, "p_dn", a.p_dn, populations(s.state).p_dn});
            }
            break;
        }
    }
    rep.finalize();
    return rep;
}

}  // namespace lzsm::harness
