#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "uwoc/errors.hpp"
#include "uwoc/math.hpp"
#include "uwoc/tdhp.hpp"
#include "uwoc/water_channel.hpp"

namespace uwoc {

// Transceiver optics and powers. Defaults are the reference parameter set
// used for all headline numbers: 0.5 W laser into a 10 degree half-beamwidth,
// 0.2 m receiver aperture at 0.6 m focal length, 10 degree misalignment and
// FOV, 2 uW thermal noise floor. NEP and bandwidth are carried for reporting
// only; the SNR model uses the constant noise power.
struct LinkGeometry {
    double transmit_power_w = 0.5;  // P_t
    double noise_power_w = 2e-6;    // P_n, thermal only
    double theta_deg = 10.0;        // transmit half-beamwidth
    double phi_deg = 10.0;          // receiver optical axis vs line of sight
    double fov_deg = 10.0;          // receiver field of view
    double focal_length_m = 0.6;    // F
    std::optional<double> aperture_diameter_m = 0.2; // D, when given explicitly
    double nep_w_per_rthz = 0.4e-12;
    double bandwidth_hz = 1e9;

    void validate() const {
        if (!(transmit_power_w > 0.0))
            throw std::domain_error("LinkGeometry: transmit power must be > 0");
        if (!(noise_power_w > 0.0))
            throw std::domain_error("LinkGeometry: noise power must be > 0");
        if (!(theta_deg > 0.0 && theta_deg < 90.0))
            throw std::domain_error("LinkGeometry: theta must be in (0, 90) degrees");
        if (!(phi_deg >= 0.0 && phi_deg < 90.0))
            throw std::domain_error("LinkGeometry: phi must be in [0, 90) degrees");
        if (!(fov_deg > 0.0 && fov_deg < 90.0))
            throw std::domain_error("LinkGeometry: fov must be in (0, 90) degrees");
        if (!(focal_length_m > 0.0))
            throw std::domain_error("LinkGeometry: focal length must be > 0");
        if (aperture_diameter_m && !(*aperture_diameter_m > 0.0))
            throw std::domain_error("LinkGeometry: aperture diameter must be > 0");
        if (!(nep_w_per_rthz >= 0.0))
            throw std::domain_error("LinkGeometry: NEP must be >= 0");
        if (!(bandwidth_hz > 0.0))
            throw std::domain_error("LinkGeometry: bandwidth must be > 0");
    }
};

// The catalog aperture (0.2 m) and the focal-length formula disagree by a
// few percent at the default FOV; both are supported and the caller picks.
enum class ApertureMode { Explicit, FromFov };

inline ApertureMode aperture_mode_from_name(std::string_view name) {
    if (name == "explicit") return ApertureMode::Explicit;
    if (name == "from-fov") return ApertureMode::FromFov;
    throw ConfigError("unknown aperture mode '" + std::string(name) +
                      "' (expected explicit or from-fov)");
}

inline std::string_view to_string(ApertureMode m) {
    return m == ApertureMode::Explicit ? "explicit" : "from-fov";
}

// D = 2 F tan(FOV).
inline double aperture(double focal_length_m, double fov_deg) {
    if (!(focal_length_m > 0.0))
        throw std::domain_error("aperture: focal length must be > 0");
    if (!(fov_deg > 0.0 && fov_deg < 90.0))
        throw std::domain_error("aperture: fov must be in (0, 90) degrees");
    return 2.0 * focal_length_m * std::tan(radians(fov_deg));
}

inline double effective_aperture(const LinkGeometry& g, ApertureMode mode) {
    g.validate();
    if (mode == ApertureMode::Explicit) {
        if (!g.aperture_diameter_m)
            throw ConfigError("effective_aperture: explicit mode requires an aperture diameter");
        return *g.aperture_diameter_m;
    }
    return aperture(g.focal_length_m, g.fov_deg);
}

namespace detail {
// The geometry factor P_t D^2 cos(phi) / (4 tan^2(theta) P_n): received SNR
// at distance L is this times exp(-K L)/L^2.
inline double snr_geometry_factor(const LinkGeometry& g, ApertureMode mode) {
    const double d = effective_aperture(g, mode);
    const double tan_theta = std::tan(radians(g.theta_deg));
    return g.transmit_power_w * d * d * std::cos(radians(g.phi_deg)) /
           (4.0 * tan_theta * tan_theta * g.noise_power_w);
}
} // namespace detail

inline double snr_at_distance(const LinkGeometry& g, double k_per_m, double distance_m,
                              ApertureMode mode = ApertureMode::Explicit) {
    if (!(k_per_m >= 0.0))
        throw std::domain_error("snr_at_distance: attenuation must be >= 0");
    if (!(distance_m > 0.0))
        throw std::domain_error("snr_at_distance: distance must be > 0");
    return detail::snr_geometry_factor(g, mode) * std::exp(-k_per_m * distance_m) /
           (distance_m * distance_m);
}

struct LmaxResult {
    double l_max_m = 0.0;
    double residual = 0.0; // relative mismatch of exp(K L) L^2 against the budget
    int iterations = 0;
};

// Maximum distance at which the link still delivers required_snr: solves
// exp(K L) L^2 = C with C the SNR budget. Solved in log space, where the
// left side is strictly increasing and immune to overflow, by bisection on
// a geometrically grown bracket.
inline LmaxResult solve_lmax(const LinkGeometry& g, double k_per_m, double required_snr_linear,
                             ApertureMode mode = ApertureMode::Explicit) {
    if (!(k_per_m >= 0.0))
        throw std::domain_error("solve_lmax: attenuation must be >= 0");
    if (!(required_snr_linear > 0.0))
        throw std::domain_error("solve_lmax: required snr must be > 0");
    const double budget = detail::snr_geometry_factor(g, mode) / required_snr_linear;

    if (k_per_m == 0.0) {
        const double l = std::sqrt(budget);
        return {l, std::fabs(l * l / budget - 1.0), 0};
    }

    const double log_budget = std::log(budget);
    const auto f = [&](double l) { return k_per_m * l + 2.0 * std::log(l) - log_budget; };

    int iters = 0;
    double lo = 1e-6, hi = 1.0;
    while (f(lo) > 0.0) { lo *= 0.5; ++iters; }
    while (f(hi) < 0.0) { hi *= 2.0; ++iters; }
    while (hi - lo > 1e-15 * hi && iters < 400) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
        ++iters;
    }
    const double l = 0.5 * (lo + hi);
    return {l, std::fabs(std::expm1(f(l))), iters};
}

// FEC-limit SNR for (p, q) composed with the distance solver.
inline LmaxResult lmax_for_params(const LinkGeometry& g, const ChannelPreset& channel,
                                  TdhpParams params, double threshold = kDefaultFecThreshold,
                                  ApertureMode mode = ApertureMode::Explicit,
                                  double tol_db = 0.01) {
    const FecSearchResult fec = fec_limit_snr(params, threshold, tol_db);
    return solve_lmax(g, channel.attenuation_per_m, fec.snr_linear, mode);
}

} // namespace uwoc
