#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "slicereg/afd.hpp"
#include "slicereg/hardy.hpp"
#include "slicereg/quaternion.hpp"
#include "slicereg/series.hpp"

namespace slicereg {

// Quaternions serialize as [w, x, y, z] everywhere.
inline void to_json(nlohmann::json& j, const Quaterniond& q) {
    j = nlohmann::json::array({q.w(), q.x(), q.y(), q.z()});
}

inline void from_json(const nlohmann::json& j, Quaterniond& q) {
    if (!j.is_array() || j.size() != 4)
        throw std::runtime_error("quaternion must be a 4-element array [w,x,y,z]");
    q = Quaterniond(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                    j[3].get<double>());
}

inline void to_json(nlohmann::json& j, const SliceSeriesd& f) {
    j = nlohmann::json{{"trunc_order", f.order()}, {"coeffs", f.coeffs()}};
}

inline void from_json(const nlohmann::json& j, SliceSeriesd& f) {
    auto coeffs = j.at("coeffs").get<std::vector<Quaterniond>>();
    if (coeffs.empty())
        throw std::runtime_error("series: \"coeffs\" must be non-empty");
    SliceSeriesd out(std::move(coeffs));
    if (j.contains("trunc_order"))
        out = out.truncated(j.at("trunc_order").get<int>());
    f = out;
}

inline void to_json(nlohmann::json& j, const SearchConfigd& cfg) {
    j = nlohmann::json{{"radial_levels", cfg.radial_levels},
                       {"sphere_points", cfg.sphere_points},
                       {"rho_max", cfg.rho_max},
                       {"refine_iters", cfg.refine_iters},
                       {"refine_tol", cfg.refine_tol}};
}

// Partial configs are fine: absent keys keep their defaults.
inline void from_json(const nlohmann::json& j, SearchConfigd& cfg) {
    cfg.radial_levels = j.value("radial_levels", cfg.radial_levels);
    cfg.sphere_points = j.value("sphere_points", cfg.sphere_points);
    cfg.rho_max = j.value("rho_max", cfg.rho_max);
    cfg.refine_iters = j.value("refine_iters", cfg.refine_iters);
    cfg.refine_tol = j.value("refine_tol", cfg.refine_tol);
}

// Input signal: either raw coefficients or a kernel-atom combination;
// atoms are synthesized into coefficients at load time.
struct SignalSpec {
    enum class Kind { coeffs, atoms };
    Kind kind = Kind::coeffs;
    int trunc_order = kDefaultOrder;
    SliceSeriesd series{0};
    std::optional<AtomicSignald> atoms;
};

inline SignalSpec load_signal_spec(const nlohmann::json& j) {
    SignalSpec spec;
    const std::string kind = j.value("kind", std::string("coeffs"));
    if (kind == "coeffs") {
        spec.kind = SignalSpec::Kind::coeffs;
        if (!j.contains("coeffs"))
            throw std::runtime_error("signal spec: kind \"coeffs\" needs a \"coeffs\" field");
        SliceSeriesd series{0};
        from_json(j, series);
        // Without an explicit trunc_order the list is a polynomial in the
        // standard ambient space, not a reason to shrink it.
        if (!j.contains("trunc_order") && series.order() < kDefaultOrder)
            series = series.truncated(kDefaultOrder);
        spec.trunc_order = series.order();
        spec.series = series;
    } else if (kind == "atoms") {
        spec.kind = SignalSpec::Kind::atoms;
        if (!j.contains("atoms") || !j.at("atoms").is_array())
            throw std::runtime_error("signal spec: kind \"atoms\" needs an \"atoms\" array");
        spec.trunc_order = j.value("trunc_order", kDefaultOrder);
        AtomicSignald signal;
        size_t idx = 0;
        for (const auto& entry : j.at("atoms")) {
            Quaterniond param, coeff;
            try {
                from_json(entry.at("param"), param);
                from_json(entry.at("coeff"), coeff);
                signal.atoms.push_back({BallPointd(param), coeff});
            } catch (const std::exception& e) {
                throw std::runtime_error("signal spec: atoms[" + std::to_string(idx) +
                                         "]: " + e.what());
            }
            ++idx;
        }
        spec.series = signal.synthesize(spec.trunc_order);
        spec.atoms = std::move(signal);
    } else {
        throw std::runtime_error("signal spec: unknown kind \"" + kind + "\"");
    }
    return spec;
}

inline nlohmann::json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

inline SignalSpec load_signal_spec_file(const std::string& path) {
    return load_signal_spec(parse_json_file(path));
}

inline nlohmann::json result_json(const AFDStated& state, const SearchConfigd& cfg,
                                  int max_iters, double energy_tol) {
    nlohmann::json params = nlohmann::json::array();
    for (int k = 0; k < state.steps(); ++k)
        params.push_back(state.tm.param(k).value());
    nlohmann::json config;
    to_json(config, cfg);
    config["max_iters"] = max_iters;
    config["energy_tol"] = energy_tol;
    return nlohmann::json{{"trunc_order", state.tm.order()},
                          {"params", params},
                          {"coeffs", state.coefficients},
                          {"energies", state.energies},
                          {"remainder_norms", state.remainder_norms},
                          {"shell_steps", state.shell_steps},
                          {"config", config}};
}

// Shortest-exact decimal form; CSV cells round-trip to the same double.
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Energy decay rows (m, |r_m|) with the M/sqrt(m) envelope column when
// a certificate is known.
inline std::string decay_csv(const std::vector<double>& remainder_norms,
                             std::optional<double> certificate) {
    std::string out = certificate ? "m,remainder_norm,bound\n" : "m,remainder_norm\n";
    for (size_t i = 0; i < remainder_norms.size(); ++i) {
        const int m = static_cast<int>(i) + 1;
        out += std::to_string(m);
        out += ',';
        out += format_real(remainder_norms[i]);
        if (certificate) {
            out += ',';
            out += format_real(*certificate / std::sqrt(double(m)));
        }
        out += '\n';
    }
    return out;
}

inline std::string rate_csv(const RateReportd& report) {
    std::string out = "m,remainder_norm,bound,pass,recurrence\n";
    for (const auto& row : report.rows) {
        out += std::to_string(row.m);
        out += ',';
        out += format_real(row.remainder_norm);
        out += ',';
        out += format_real(row.bound);
        out += ',';
        out += row.bound_ok ? '1' : '0';
        out += ',';
        out += row.recurrence_ok ? '1' : '0';
        out += '\n';
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace slicereg
