#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "uwoc/link_geometry.hpp"
#include "uwoc/tdhp.hpp"
#include "uwoc/water_channel.hpp"

namespace uwoc {

enum class SweepVariable { P, Q, Theta, Phi, Fov };

inline std::string_view to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::P: return "p";
        case SweepVariable::Q: return "q";
        case SweepVariable::Theta: return "theta";
        case SweepVariable::Phi: return "phi";
        case SweepVariable::Fov: return "fov";
    }
    return "?";
}

inline SweepVariable sweep_variable_from_name(std::string_view name) {
    if (name == "p") return SweepVariable::P;
    if (name == "q") return SweepVariable::Q;
    if (name == "theta") return SweepVariable::Theta;
    if (name == "phi") return SweepVariable::Phi;
    if (name == "fov") return SweepVariable::Fov;
    throw ConfigError("unknown sweep variable '" + std::string(name) +
                      "' (expected p, q, theta, phi, or fov)");
}

// One output row: the swept value plus the operating point and its results.
// "optimum" rows carry the grid-optimized q, "non-optimum" rows q = 0;
// q-sweep rows are plain "grid" evaluations, "no-solution" marks unreachable
// thresholds (NaN results).
struct SweepRecord {
    SweepVariable variable = SweepVariable::P;
    double value = 0.0;
    std::string channel;     // "-" when no channel applies
    double p = 0.0;
    double q_used = 0.0;
    std::string mode;
    double fec_limit_db = std::numeric_limits<double>::quiet_NaN();
    double lmax_m = std::numeric_limits<double>::quiet_NaN();
};

struct SweepSpec {
    SweepVariable variable = SweepVariable::P;
    std::vector<double> grid;           // swept values, strictly increasing
    std::vector<ChannelPreset> channels;
    std::vector<double> p_grid;         // p values for geometry sweeps
    std::vector<double> q_grid;         // candidate q grid for optimum rows
    double fixed_p = 0.5;               // p for q sweeps
    LinkGeometry geometry;
    bool optimize = true;               // emit optimum rows alongside q = 0
    double threshold = kDefaultFecThreshold;
    ApertureMode aperture_mode = ApertureMode::Explicit;
};

// Stated or strongly implied figure grids: p over [0, 1] step 0.1, theta
// 10..30 step 5, phi and fov 5..25 step 5 (phi additionally probed at 50).
inline std::vector<double> default_sweep_grid(SweepVariable v) {
    std::vector<double> g;
    switch (v) {
        case SweepVariable::P:
        case SweepVariable::Q:
            for (int i = 0; i <= (v == SweepVariable::P ? 10 : 9); ++i) g.push_back(i / 10.0);
            break;
        case SweepVariable::Theta:
            for (int t = 10; t <= 30; t += 5) g.push_back(t);
            break;
        case SweepVariable::Phi:
        case SweepVariable::Fov:
            for (int t = 5; t <= 25; t += 5) g.push_back(t);
            break;
    }
    return g;
}

namespace detail {

inline void validate_grid(std::span<const double> grid) {
    if (grid.empty())
        throw std::invalid_argument("sweep: grid must be nonempty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("sweep: grid must be strictly increasing");
}

// q for the optimum row of a given p: grid-optimized inside (0,1), forced to
// 0 at the pure-format endpoints where q has no effect.
inline double optimum_q_for(double p, double threshold, std::span<const double> q_grid) {
    if (p == 0.0 || p == 1.0) return 0.0;
    return optimize_q(p, threshold, q_grid).q_star;
}

inline void sort_records(std::vector<SweepRecord>& records) {
    std::sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
        if (a.value != b.value) return a.value < b.value;
        if (a.channel != b.channel) return a.channel < b.channel;
        if (a.p != b.p) return a.p < b.p;
        return a.mode < b.mode;
    });
}

} // namespace detail

// FEC limit and L_max per (p, channel), non-optimum (q = 0) and, when
// requested, optimum (grid-optimized q) rows.
inline std::vector<SweepRecord> sweep_p(const SweepSpec& spec) {
    detail::validate_grid(spec.grid);
    spec.geometry.validate();
    std::vector<SweepRecord> records;
    for (const double p : spec.grid) {
        const double q_star = spec.optimize
                                  ? detail::optimum_q_for(p, spec.threshold, spec.q_grid)
                                  : 0.0;
        for (int opt = 0; opt <= (spec.optimize ? 1 : 0); ++opt) {
            const TdhpParams params{p, opt ? q_star : 0.0};
            const FecSearchResult fec = fec_limit_snr(params, spec.threshold);
            for (const ChannelPreset& ch : spec.channels) {
                SweepRecord rec;
                rec.variable = SweepVariable::P;
                rec.value = p;
                rec.channel = std::string(ch.name());
                rec.p = p;
                rec.q_used = params.q;
                rec.mode = opt ? "optimum" : "non-optimum";
                rec.fec_limit_db = fec.snr_db;
                rec.lmax_m = lmax_for_params(spec.geometry, ch, params, spec.threshold,
                                             spec.aperture_mode)
                                 .l_max_m;
                records.push_back(std::move(rec));
            }
            if (spec.channels.empty()) {
                SweepRecord rec;
                rec.variable = SweepVariable::P;
                rec.value = p;
                rec.channel = "-";
                rec.p = p;
                rec.q_used = params.q;
                rec.mode = opt ? "optimum" : "non-optimum";
                rec.fec_limit_db = fec.snr_db;
                records.push_back(std::move(rec));
            }
        }
    }
    detail::sort_records(records);
    return records;
}

// FEC limit per q at fixed p. Unreachable rows are flagged, not fatal.
// L_max is attached per channel when channels are supplied.
inline std::vector<SweepRecord> sweep_q(const SweepSpec& spec) {
    detail::validate_grid(spec.grid);
    if (!(spec.fixed_p > 0.0 && spec.fixed_p < 1.0))
        throw std::domain_error("sweep_q: p must be in (0, 1)");
    spec.geometry.validate();
    std::vector<SweepRecord> records;
    for (const double q : spec.grid) {
        bool reachable = true;
        FecSearchResult fec;
        try {
            fec = fec_limit_snr({spec.fixed_p, q}, spec.threshold);
        } catch (const NoSolutionError&) {
            reachable = false;
        }
        auto make = [&](const std::string& channel) {
            SweepRecord rec;
            rec.variable = SweepVariable::Q;
            rec.value = q;
            rec.channel = channel;
            rec.p = spec.fixed_p;
            rec.q_used = q;
            rec.mode = reachable ? "grid" : "no-solution";
            if (reachable) rec.fec_limit_db = fec.snr_db;
            return rec;
        };
        if (spec.channels.empty()) {
            records.push_back(make("-"));
        } else {
            for (const ChannelPreset& ch : spec.channels) {
                SweepRecord rec = make(std::string(ch.name()));
                if (reachable)
                    rec.lmax_m = solve_lmax(spec.geometry, ch.attenuation_per_m, fec.snr_linear,
                                            spec.aperture_mode)
                                     .l_max_m;
                records.push_back(std::move(rec));
            }
        }
    }
    detail::sort_records(records);
    return records;
}

// L_max across a geometry variable (theta, phi, or fov), per channel and p.
// FOV sweeps force the aperture to follow the focal-length formula;
// otherwise the swept FOV would not change anything.
inline std::vector<SweepRecord> sweep_geometry(const SweepSpec& spec) {
    detail::validate_grid(spec.grid);
    spec.geometry.validate();
    if (spec.variable != SweepVariable::Theta && spec.variable != SweepVariable::Phi &&
        spec.variable != SweepVariable::Fov)
        throw std::invalid_argument("sweep_geometry: variable must be theta, phi, or fov");
    if (spec.channels.empty())
        throw std::invalid_argument("sweep_geometry: needs at least one channel");
    std::vector<double> p_grid = spec.p_grid;
    if (p_grid.empty()) p_grid = default_sweep_grid(SweepVariable::P);
    detail::validate_grid(p_grid);

    const ApertureMode mode =
        spec.variable == SweepVariable::Fov ? ApertureMode::FromFov : spec.aperture_mode;

    std::vector<SweepRecord> records;
    for (const double value : spec.grid) {
        LinkGeometry geom = spec.geometry;
        switch (spec.variable) {
            case SweepVariable::Theta: geom.theta_deg = value; break;
            case SweepVariable::Phi: geom.phi_deg = value; break;
            case SweepVariable::Fov: geom.fov_deg = value; break;
            default: break;
        }
        geom.validate();
        for (const double p : p_grid) {
            const double q_star = spec.optimize
                                      ? detail::optimum_q_for(p, spec.threshold, spec.q_grid)
                                      : 0.0;
            for (int opt = 0; opt <= (spec.optimize ? 1 : 0); ++opt) {
                const TdhpParams params{p, opt ? q_star : 0.0};
                const FecSearchResult fec = fec_limit_snr(params, spec.threshold);
                for (const ChannelPreset& ch : spec.channels) {
                    SweepRecord rec;
                    rec.variable = spec.variable;
                    rec.value = value;
                    rec.channel = std::string(ch.name());
                    rec.p = p;
                    rec.q_used = params.q;
                    rec.mode = opt ? "optimum" : "non-optimum";
                    rec.fec_limit_db = fec.snr_db;
                    rec.lmax_m =
                        lmax_for_params(geom, ch, params, spec.threshold, mode).l_max_m;
                    records.push_back(std::move(rec));
                }
            }
        }
    }
    detail::sort_records(records);
    return records;
}

// Entry point over a SweepSpec; dispatches on the swept variable.
inline std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
    switch (spec.variable) {
        case SweepVariable::P: return sweep_p(spec);
        case SweepVariable::Q: return sweep_q(spec);
        default: return sweep_geometry(spec);
    }
}

} // namespace uwoc
