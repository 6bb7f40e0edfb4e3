#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "lzsm/blochpert.hpp"
#include "lzsm/error.hpp"
#include "lzsm/model.hpp"

namespace lzsm::harness {

enum class Mode { trace, sweep, compare, selftest };

struct RunSpec {
    Mode mode = Mode::trace;
    DriveParams params;
    DriveConfig cfg = DriveConfig::from_physical({});
    double tau_start = -50.0;
    double tau_end = 50.0;
    double tol = 1e-10;
    double stride = 0.25;
    TruncationSpec trunc{40};
    std::string output_path;
};

enum class Observable { p_up_final, p_dn_final, uz_final, delta_param };

struct SweepAxis {
    std::string field;
    double min = 0.0;
    double max = 0.0;
    int steps = 2;
    double value(int i) const { return steps == 1 ? min : min + (max - min) * double(i) / double(steps - 1); }
};

struct SweepSpec {
    SweepAxis axis1;
    std::optional<SweepAxis> axis2;
    Observable observable = Observable::p_up_final;
};

inline const std::vector<std::string>& drive_fields() {
    static const std::vector<std::string> f = {"v",       "delta",  "eps0",    "amp_rf",
                                               "freq_rf", "amp_mw", "freq_mw", "phase"};
    return f;
}

inline double& drive_field_ref(DriveParams& p, const std::string& name) {
    if (name == "v") return p.v;
    if (name == "delta") return p.delta;
    if (name == "eps0") return p.eps0;
    if (name == "amp_rf") return p.amp_rf;
    if (name == "freq_rf") return p.freq_rf;
    if (name == "amp_mw") return p.amp_mw;
    if (name == "freq_mw") return p.freq_mw;
    if (name == "phase") return p.phase;
    throw ValidationError("unknown drive field '" + name + "'");
}

inline std::string mode_name(Mode m) {
    switch (m) {
        case Mode::trace: return "trace";
        case Mode::sweep: return "sweep";
        case Mode::compare: return "compare";
        default: return "selftest";
    }
}

inline std::string observable_name(Observable o) {
    switch (o) {
        case Observable::p_up_final: return "p_up_final";
        case Observable::p_dn_final: return "p_dn_final";
        case Observable::uz_final: return "uz_final";
        default: return "delta_param";
    }
}

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline std::optional<double> parse_plain_number(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// Accepts a plain number or [k*]pi[/m] with optional sign, e.g. "pi/2", "-3*pi/4".
inline std::optional<double> parse_number(const std::string& raw) {
    const std::string s = trim(raw);
    if (auto v = parse_plain_number(s)) return v;
    const auto p = s.find("pi");
    if (p == std::string::npos) return std::nullopt;
    double k = 1.0, m = 1.0;
    std::string head = trim(s.substr(0, p));
    std::string tail = trim(s.substr(p + 2));
    if (!head.empty()) {
        if (head == "-") {
            k = -1.0;
        } else if (head == "+") {
            k = 1.0;
        } else {
            if (head.back() != '*') return std::nullopt;
            head.pop_back();
            auto v = parse_plain_number(trim(head));
            if (!v) return std::nullopt;
            k = *v;
        }
    }
    if (!tail.empty()) {
        if (tail.front() != '/') return std::nullopt;
        auto v = parse_plain_number(trim(tail.substr(1)));
        if (!v || *v == 0.0) return std::nullopt;
        m = *v;
    }
    return k * std::numbers::pi / m;
}

struct Entry {
    std::string value;
    std::string where;  // "line N" or "json"
};

using EntryMap = std::map<std::string, Entry>;

inline void flatten_json(const nlohmann::json& j, const std::string& prefix, EntryMap& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten_json(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        return;
    }
    std::string v;
    if (j.is_string())
        v = j.get<std::string>();
    else if (j.is_number())
        v = j.dump();
    else if (j.is_boolean())
        v = j.get<bool>() ? "1" : "0";
    else
        throw ValidationError("json key '" + prefix + "': unsupported value type");
    out[prefix] = {v, "json"};
}

inline EntryMap read_entries(const std::string& text) {
    EntryMap out;
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(t);
        } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError(std::string("json parse error: ") + e.what());
        }
        flatten_json(j, "", out);
        return out;
    }
    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto c = line.find('#'); c != std::string::npos) line.erase(c);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "line " + std::to_string(line_no);
        if (eq == std::string::npos) throw ValidationError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ValidationError(where + ": empty key");
        if (out.count(key)) throw ValidationError(where + ": duplicate key '" + key + "'");
        out[key] = {trim(line.substr(eq + 1)), where};
    }
    return out;
}

// Canonical name of a key: "drive.delta" and "delta" both map to "delta".
inline std::optional<std::string> canonical_run_key(const std::string& key) {
    static const std::map<std::string, std::string> groups = {
        {"drive", "v delta eps0 amp_rf freq_rf amp_mw freq_mw phase"},
        {"window", "tau_start tau_end"},
        {"integrator", "tol stride"},
        {"truncation", "n_max"},
    };
    static const std::vector<std::string> flat = {"v",      "delta",   "eps0",    "amp_rf",    "freq_rf",
                                                  "amp_mw", "freq_mw", "phase",   "tau_start", "tau_end",
                                                  "tol",    "stride",  "n_max",   "mode",      "output"};
    if (std::find(flat.begin(), flat.end(), key) != flat.end()) return key;
    const auto dot = key.find('.');
    if (dot == std::string::npos) return std::nullopt;
    const std::string g = key.substr(0, dot), k = key.substr(dot + 1);
    const auto it = groups.find(g);
    if (it == groups.end()) return std::nullopt;
    const std::string padded = " " + it->second + " ";
    if (padded.find(" " + k + " ") == std::string::npos) return std::nullopt;
    return k;
}

inline double number_of(const std::string& key, const Entry& e) {
    const auto v = parse_number(e.value);
    if (!v || !std::isfinite(*v))
        throw ValidationError(e.where + ": key '" + key + "': non-numeric value '" + e.value + "'");
    return *v;
}

}  // namespace detail

inline RunSpec parse_config(const std::string& text) {
    const detail::EntryMap raw = detail::read_entries(text);
    std::map<std::string, detail::Entry> entries;
    for (const auto& [k, e] : raw) {
        const auto c = detail::canonical_run_key(k);
        if (!c) throw ValidationError(e.where + ": unknown key '" + k + "'");
        if (entries.count(*c)) throw ValidationError(e.where + ": key '" + k + "' given twice");
        entries[*c] = e;
    }
    RunSpec spec;
    std::optional<int> n_max;
    for (const auto& [k, e] : entries) {
        if (k == "mode") {
            if (e.value == "trace") spec.mode = Mode::trace;
            else if (e.value == "sweep") spec.mode = Mode::sweep;
            else if (e.value == "compare") spec.mode = Mode::compare;
            else if (e.value == "selftest") spec.mode = Mode::selftest;
            else throw ValidationError(e.where + ": key 'mode': unknown mode '" + e.value + "'");
        } else if (k == "output") {
            spec.output_path = e.value;
        } else if (k == "tau_start") {
            spec.tau_start = detail::number_of(k, e);
        } else if (k == "tau_end") {
            spec.tau_end = detail::number_of(k, e);
        } else if (k == "tol") {
            spec.tol = detail::number_of(k, e);
        } else if (k == "stride") {
            spec.stride = detail::number_of(k, e);
        } else if (k == "n_max") {
            const double v = detail::number_of(k, e);
            if (v != std::floor(v) || v < 1 || v > specfun::kBesselMaxOrder)
                throw ValidationError(e.where + ": key 'n_max': must be a positive integer");
            n_max = int(v);
        } else {
            drive_field_ref(spec.params, k) = detail::number_of(k, e);
        }
    }
    try {
        spec.cfg = DriveConfig::from_any(spec.params);
    } catch (const ValidationError& err) {
        throw ValidationError(std::string("drive parameters: ") + err.what());
    }
    if (!(spec.tau_start < spec.tau_end))
        throw ValidationError("window: invariant tau_start < tau_end violated");
    if (!(spec.stride > 0.0)) throw ValidationError("integrator: invariant stride > 0 violated");
    if (!(spec.tol >= kMinTol && spec.tol <= kMaxTol))
        throw ValidationError("integrator: tol must lie in [1e-13, 1e-6]");
    spec.trunc = n_max ? TruncationSpec{*n_max} : default_truncation(spec.cfg);
    validate_truncation(spec.trunc, spec.cfg);
    return spec;
}

inline SweepSpec parse_sweep(const std::string& text) {
    const detail::EntryMap raw = detail::read_entries(text);
    SweepSpec s;
    bool has1 = false, has2 = false;
    std::map<std::string, bool> seen;
    const auto axis_key = [&](const std::string& k, SweepAxis& ax, const detail::Entry& e) {
        const auto dot = k.find('.');
        const std::string f = k.substr(dot + 1);
        if (f == "field") {
            if (std::find(drive_fields().begin(), drive_fields().end(), e.value) == drive_fields().end())
                throw ValidationError(e.where + ": key '" + k + "': '" + e.value + "' is not a drive field");
            ax.field = e.value;
        } else if (f == "min") {
            ax.min = detail::number_of(k, e);
        } else if (f == "max") {
            ax.max = detail::number_of(k, e);
        } else if (f == "steps") {
            const double v = detail::number_of(k, e);
            if (v != std::floor(v) || v < 2 || v > 1e6)
                throw ValidationError(e.where + ": key '" + k + "': steps must be an integer >= 2");
            ax.steps = int(v);
        } else {
            throw ValidationError(e.where + ": unknown key '" + k + "'");
        }
        seen[k] = true;
    };
    SweepAxis a2;
    for (const auto& [k, e] : raw) {
        if (k.rfind("axis1.", 0) == 0) {
            axis_key(k, s.axis1, e);
            has1 = true;
        } else if (k.rfind("axis2.", 0) == 0) {
            axis_key(k, a2, e);
            has2 = true;
        } else if (k == "observable") {
            if (e.value == "p_up_final") s.observable = Observable::p_up_final;
            else if (e.value == "p_dn_final") s.observable = Observable::p_dn_final;
            else if (e.value == "uz_final") s.observable = Observable::uz_final;
            else if (e.value == "delta_param") s.observable = Observable::delta_param;
            else throw ValidationError(e.where + ": key 'observable': unknown observable '" + e.value + "'");
        } else {
            throw ValidationError(e.where + ": unknown key '" + k + "'");
        }
    }
    const auto require = [&](const std::string& ax) {
        for (const char* f : {"field", "min", "max", "steps"})
            if (!seen.count(ax + "." + f)) throw ValidationError("sweep: missing key '" + ax + "." + f + "'");
    };
    if (!has1) throw ValidationError("sweep: axis1 is required");
    require("axis1");
    if (has2) {
        require("axis2");
        if (a2.field == s.axis1.field) throw ValidationError("sweep: axis2.field must differ from axis1.field");
        s.axis2 = a2;
    }
    return s;
}

}  // namespace lzsm::harness
