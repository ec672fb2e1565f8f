// params_io.hpp - flat key = value parameter files.
//
// Schema (one entry per line, '#' starts a comment, keys unique):
//
//   delta_a_mhz, delta_31_mhz, delta_32_mhz,   detunings / 2pi, MHz
//   g_a_mhz, omega_31_mhz, omega_32_mhz,       couplings / 2pi, MHz
//   kappa_a_mhz, gamma_21_mhz, gamma_31_mhz, gamma_32_mhz
//   n_left, n_right                              populations (real, >= 0)
//   n_total, eta                                 alternative to n_left/n_right
//   phi_rad                                      loop phase of the left enantiomer
//
// Absent keys default to zero. The result is validated.

#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "model.hpp"

namespace chiralcav {

struct FrequencyField {
    std::string_view name;
    AngularFrequency ModelParams::*member;
};

inline constexpr std::array<FrequencyField, 10> frequency_fields{{
    {"delta_a", &ModelParams::delta_a},
    {"delta_31", &ModelParams::delta_31},
    {"delta_32", &ModelParams::delta_32},
    {"g_a", &ModelParams::g_a},
    {"omega_31", &ModelParams::omega_31},
    {"omega_32", &ModelParams::omega_32},
    {"kappa_a", &ModelParams::kappa_a},
    {"gamma_21", &ModelParams::gamma_21},
    {"gamma_31", &ModelParams::gamma_31},
    {"gamma_32", &ModelParams::gamma_32},
}};

/// 17 significant digits; round-trips every double.
inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_number(const std::string& text, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError(where + ": '" + text + "' is not a number");
    }
    if (used != text.size()) throw ConfigError(where + ": '" + text + "' is not a number");
    return v;
}

}  // namespace detail

inline ModelParams parse_params(std::istream& in, const std::string& source = "<params>") {
    std::map<std::string, double> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = source + ":" + std::to_string(line_no);
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = detail::trim(std::string_view(body).substr(0, eq));
        const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (entries.contains(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
        entries[key] = detail::parse_number(value, where);
    }

    ModelParams p;
    const auto take = [&](const std::string& key) -> std::optional<double> {
        const auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        const double v = it->second;
        entries.erase(it);
        return v;
    };
    for (const auto& f : frequency_fields)
        if (auto v = take(std::string(f.name) + "_mhz")) p.*f.member = AngularFrequency::from_mhz(*v);
    const auto n_left = take("n_left");
    const auto n_right = take("n_right");
    const auto n_total = take("n_total");
    const auto eta = take("eta");
    if (n_total || eta) {
        if (n_left || n_right) throw ConfigError(source + ": give either n_left/n_right or n_total/eta, not both");
        if (!n_total || !eta) throw ConfigError(source + ": n_total and eta must be given together");
        p.n_left = *n_total;
        p = with_eta(p, *eta);
    } else {
        p.n_left = n_left.value_or(0.0);
        p.n_right = n_right.value_or(0.0);
    }
    p.phi = take("phi_rad").value_or(0.0);
    if (!entries.empty()) throw ConfigError(source + ": unknown key '" + entries.begin()->first + "'");
    return validate(p);
}

inline ModelParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open parameter file '" + path + "'");
    return parse_params(in, path);
}

inline std::string format_params(const ModelParams& p) {
    std::ostringstream out;
    for (const auto& f : frequency_fields) out << f.name << "_mhz = " << format_double((p.*f.member).to_mhz()) << '\n';
    out << "n_left = " << format_double(p.n_left) << '\n';
    out << "n_right = " << format_double(p.n_right) << '\n';
    out << "phi_rad = " << format_double(p.phi) << '\n';
    return out.str();
}

/// Sets one named parameter. Frequencies are given as /2pi in MHz, phi in
/// rad, populations as counts; "eta" redistributes N_L, N_R at fixed N.
/// A trailing "_mhz" / "_rad" on the name is accepted.
inline ModelParams set_parameter(ModelParams p, std::string_view name, double value) {
    if (name.ends_with("_mhz")) name.remove_suffix(4);
    if (name == "phi_rad") name = "phi";
    for (const auto& f : frequency_fields) {
        if (f.name == name) {
            p.*f.member = AngularFrequency::from_mhz(value);
            return p;
        }
    }
    if (name == "n_left") p.n_left = value;
    else if (name == "n_right") p.n_right = value;
    else if (name == "phi") p.phi = value;
    else if (name == "eta") p = with_eta(p, value);
    else throw ConfigError("unknown parameter '" + std::string(name) + "'");
    return p;
}

inline bool is_parameter_name(std::string_view name) {
    try {
        set_parameter(ModelParams{}, name, 0.0);
        return true;
    } catch (const ConfigError&) {
        return false;
    }
}

}  // namespace chiralcav
