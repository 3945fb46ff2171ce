#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "uwoc/errors.hpp"

namespace uwoc {

enum class ChannelColor { Red, Green, Blue, Custom };

inline std::string_view to_string(ChannelColor c) {
    switch (c) {
        case ChannelColor::Red: return "red";
        case ChannelColor::Green: return "green";
        case ChannelColor::Blue: return "blue";
        case ChannelColor::Custom: return "custom";
    }
    return "?";
}

// A laser-diode channel: wavelength plus the composite beam attenuation
// coefficient K (absorption + scattering) in 1/m.
struct ChannelPreset {
    ChannelColor label = ChannelColor::Custom;
    double wavelength_nm = 0.0;
    double attenuation_per_m = 0.0; // K

    static ChannelPreset red() { return {ChannelColor::Red, 650.0, 0.3}; }
    static ChannelPreset green() { return {ChannelColor::Green, 550.0, 0.07}; }
    static ChannelPreset blue() { return {ChannelColor::Blue, 450.0, 0.02}; }

    static ChannelPreset custom(double k_per_m, double wavelength_nm = 0.0) {
        if (!(k_per_m >= 0.0))
            throw std::domain_error("ChannelPreset: custom K must be >= 0");
        return {ChannelColor::Custom, wavelength_nm, k_per_m};
    }

    // Accepts "red", "green", "blue" (the CLI channel names).
    static ChannelPreset from_name(std::string_view name) {
        if (name == "red") return red();
        if (name == "green") return green();
        if (name == "blue") return blue();
        throw ConfigError("unknown channel name '" + std::string(name) +
                          "' (expected red, green, or blue)");
    }

    std::string_view name() const { return to_string(label); }
};

// Inputs of the temperature-dependent absorption model. The composite K in
// ChannelPreset already folds absorption and scattering together; this type
// exists for callers that build K from parts.
struct AbsorptionModel {
    double base_absorption_per_m = 0.0;       // absorption at T = 0
    double temperature_c = 0.0;               // water temperature
    double temperature_coeff_per_m_c = 0.0;   // absorption change per degree
    double scattering_per_m = 0.0;            // K_S
};

enum class WaterKind { PureSeafloor, ShallowSea, Dirty };

// Qualitative water classes. Only the optimum-wavelength band is numeric;
// turbidity is a tag, never a coefficient.
struct WaterType {
    WaterKind kind;
    double band_low_nm;
    double band_high_nm;
    std::string_view turbidity_note;
};

inline WaterType water_type(WaterKind kind) {
    switch (kind) {
        case WaterKind::PureSeafloor:
            return {kind, 450.0, 500.0, "low chlorophyll/gelbstoff/plankton"};
        case WaterKind::ShallowSea:
            return {kind, 520.0, 570.0, "high chlorophyll/gelbstoff/plankton"};
        case WaterKind::Dirty:
            return {kind, 520.0, 570.0, "very high chlorophyll/gelbstoff/plankton"};
    }
    throw std::invalid_argument("water_type: unknown kind");
}

// Beer-Lambert propagation: P0 * exp(-K_T * d).
inline double received_power(double p0_w, double k_total_per_m, double distance_m) {
    if (!(p0_w >= 0.0))
        throw std::domain_error("received_power: transmit power must be >= 0");
    if (!(k_total_per_m >= 0.0))
        throw std::domain_error("received_power: attenuation coefficient must be >= 0");
    if (!(distance_m >= 0.0))
        throw std::domain_error("received_power: distance must be >= 0");
    return p0_w * std::exp(-k_total_per_m * distance_m);
}

// K_T = K_A + K_S.
inline double beam_attenuation(double k_absorption_per_m, double k_scattering_per_m) {
    if (!(k_absorption_per_m >= 0.0) || !(k_scattering_per_m >= 0.0))
        throw std::domain_error("beam_attenuation: coefficients must be >= 0");
    return k_absorption_per_m + k_scattering_per_m;
}

// K_A = K_A0 + T * a. Rejects parameter combinations that would produce a
// negative (unphysical) absorption coefficient.
inline double absorption_coefficient(const AbsorptionModel& m) {
    if (!(m.base_absorption_per_m >= 0.0))
        throw std::domain_error("absorption_coefficient: base absorption must be >= 0");
    if (!(m.scattering_per_m >= 0.0))
        throw std::domain_error("absorption_coefficient: scattering must be >= 0");
    const double k_a = m.base_absorption_per_m + m.temperature_c * m.temperature_coeff_per_m_c;
    if (!(k_a >= 0.0))
        throw std::domain_error("absorption_coefficient: resulting K_A is negative");
    return k_a;
}

} // namespace uwoc
