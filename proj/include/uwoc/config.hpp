#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "uwoc/errors.hpp"
#include "uwoc/link_geometry.hpp"
#include "uwoc/tdhp.hpp"
#include "uwoc/water_channel.hpp"

namespace uwoc {

// Flat "key = value" config text: one entry per line, '#' comments, blank
// lines ignored. Keys follow the catalog symbol names (P_t_watts, theta_deg,
// ...). Parsing keeps the line number of every entry for error reporting.
struct ConfigFile {
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::string path;
    std::map<std::string, Entry> entries;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

} // namespace detail

inline ConfigFile parse_config_text(std::string_view text, std::string path = "<config>") {
    ConfigFile cfg;
    cfg.path = std::move(path);
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(cfg.path + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + std::string(line) + "'");
        const std::string key{detail::trim(line.substr(0, eq))};
        const std::string value{detail::trim(line.substr(eq + 1))};
        if (key.empty() || value.empty())
            throw ConfigError(cfg.path + ":" + std::to_string(line_no) +
                              ": empty key or value");
        if (cfg.entries.count(key))
            throw ConfigError(cfg.path + ":" + std::to_string(line_no) + ": duplicate key '" +
                              key + "' (first at line " +
                              std::to_string(cfg.entries.at(key).line) + ")");
        cfg.entries[key] = {value, line_no};
    }
    return cfg;
}

inline ConfigFile parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

// Everything a run can take from a config file. CLI flags override these
// after application.
struct RunSettings {
    LinkGeometry geometry;
    ChannelPreset channel = ChannelPreset::blue();
    TdhpParams params;
    double fec_threshold = kDefaultFecThreshold;
    ApertureMode aperture_mode = ApertureMode::Explicit;
    std::optional<std::uint64_t> seed;
};

namespace detail {

inline double parse_number(const ConfigFile& cfg, const std::string& key,
                           const ConfigFile::Entry& entry) {
    try {
        std::size_t consumed = 0;
        const double v = std::stod(entry.value, &consumed);
        if (consumed != entry.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(cfg.path + ":" + std::to_string(entry.line) +
                          ": invalid number for key '" + key + "': '" + entry.value + "'");
    }
}

inline std::uint64_t parse_u64(const ConfigFile& cfg, const std::string& key,
                               const ConfigFile::Entry& entry) {
    try {
        // stoull accepts and wraps a leading minus; reject it up front
        if (entry.value.find('-') != std::string::npos)
            throw std::invalid_argument("negative");
        std::size_t consumed = 0;
        const unsigned long long v = std::stoull(entry.value, &consumed);
        if (consumed != entry.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(cfg.path + ":" + std::to_string(entry.line) +
                          ": invalid unsigned integer for key '" + key + "': '" + entry.value +
                          "'");
    }
}

[[noreturn]] inline void out_of_range(const ConfigFile& cfg, const ConfigFile::Entry& entry,
                                      const std::string& key, const std::string& expected) {
    throw ConfigError(cfg.path + ":" + std::to_string(entry.line) + ": " + key +
                      " out of range: " + entry.value + " (expected " + expected + ")");
}

} // namespace detail

// Applies every entry of a parsed config to the settings, validating each
// value with a file:line diagnostic. Unknown keys are errors.
inline void apply_config(const ConfigFile& cfg, RunSettings& s) {
    for (const auto& [key, entry] : cfg.entries) {
        if (key == "P_t_watts") {
            const double v = detail::parse_number(cfg, key, entry);
            if (!(v > 0.0)) detail::out_of_range(cfg, entry, key, "> 0");
            s.geometry.transmit_power_w = v;
        } else if (key == "P_n_watts") {
            const double v = detail::parse_number(cfg, key, entry);
            if (!(v > 0.0)) detail::out_of_range(cfg, entry, key, "> 0");
            s.geometry.noise_power_w = v;
        } else if (key == "theta_deg") {
            const double v = detail::parse_number(cfg, key, entry);
            if (!(v > 0.0 && v < 90.0)) detail::out_of_range(cfg, entry, key, "0 < theta_deg < 90");
            s.geometry.theta_deg = v;
        } else if (key == "phi_deg") {
            const double v = detail::parse_number(cfg, key, entry);
            if (!(v >= 0.0 && v < 90.0)) detail::out_of_range(cfg, entry, key, "0 <= phi_deg < 90");
            s.geometry.phi_deg = v;
        } else if (key == "fov_deg") {
            const double v = detail::parse_number(cfg, key, entry);
            if (!(v > 0.0 && v < 90.0)) detail::out_of_range(cfg, entry, key, "0 < fov_deg < 90");
            s.geometry.fov_deg = v;
        } else if (key == "F_m") {
            const double v = detail::parse_number(cfg, key, entry);
            if (!(v > 0.0)) detail::out_of_range(cfg, entry, key, "> 0");
            s.geometry.focal_length_m = v;
        } else if (key == "D_m") {
            const double v = detail::parse_number(cfg, key, entry);
            if (!(v > 0.0)) detail::out_of_range(cfg, entry, key, "> 0");
            s.geometry.aperture_diameter_m = v;
        } else if (key == "NEP") {
            const double v = detail::parse_number(cfg, key, entry);
            if (!(v >= 0.0)) detail::out_of_range(cfg, entry, key, ">= 0");
            s.geometry.nep_w_per_rthz = v;
        } else if (key == "BW_hz") {
            const double v = detail::parse_number(cfg, key, entry);
            if (!(v > 0.0)) detail::out_of_range(cfg, entry, key, "> 0");
            s.geometry.bandwidth_hz = v;
        } else if (key == "channel") {
            try {
                s.channel = ChannelPreset::from_name(entry.value);
            } catch (const ConfigError& e) {
                throw ConfigError(cfg.path + ":" + std::to_string(entry.line) + ": " + e.what());
            }
        } else if (key == "K_per_meter") {
            const double v = detail::parse_number(cfg, key, entry);
            if (!(v >= 0.0)) detail::out_of_range(cfg, entry, key, ">= 0");
            s.channel = ChannelPreset::custom(v);
        } else if (key == "p") {
            const double v = detail::parse_number(cfg, key, entry);
            if (!(v >= 0.0 && v <= 1.0)) detail::out_of_range(cfg, entry, key, "0 <= p <= 1");
            s.params.p = v;
        } else if (key == "q") {
            const double v = detail::parse_number(cfg, key, entry);
            if (!(v >= 0.0 && v <= 1.0)) detail::out_of_range(cfg, entry, key, "0 <= q <= 1");
            s.params.q = v;
        } else if (key == "fec_threshold") {
            const double v = detail::parse_number(cfg, key, entry);
            if (!(v > 0.0 && v < 0.5)) detail::out_of_range(cfg, entry, key, "0 < threshold < 0.5");
            s.fec_threshold = v;
        } else if (key == "aperture") {
            try {
                s.aperture_mode = aperture_mode_from_name(entry.value);
            } catch (const ConfigError& e) {
                throw ConfigError(cfg.path + ":" + std::to_string(entry.line) + ": " + e.what());
            }
        } else if (key == "seed") {
            s.seed = detail::parse_u64(cfg, key, entry);
        } else {
            throw ConfigError(cfg.path + ":" + std::to_string(entry.line) + ": unknown key '" +
                              key + "'");
        }
    }
}

// "start:stop:step" inclusive grid, e.g. "0:1:0.1". A bare number is a
// singleton grid.
inline std::vector<double> parse_grid_spec(const std::string& spec) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = spec.find(':', start);
        const std::string tok =
            spec.substr(start, colon == std::string::npos ? spec.size() - start : colon - start);
        try {
            std::size_t consumed = 0;
            parts.push_back(std::stod(tok, &consumed));
            if (consumed != tok.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ConfigError("invalid grid spec '" + spec + "': bad number '" + tok + "'");
        }
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    if (parts.size() == 1) return parts;
    if (parts.size() != 3)
        throw ConfigError("invalid grid spec '" + spec + "': expected start:stop:step");
    const double lo = parts[0], hi = parts[1], step = parts[2];
    if (!(step > 0.0) || hi < lo)
        throw ConfigError("invalid grid spec '" + spec + "': need stop >= start and step > 0");
    std::vector<double> grid;
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    grid.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) grid.push_back(lo + static_cast<double>(i) * step);
    return grid;
}

} // namespace uwoc
