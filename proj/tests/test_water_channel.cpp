#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "uwoc/water_channel.hpp"

namespace {

using namespace uwoc;

TEST(ChannelPreset, CatalogValues) {
    EXPECT_EQ(ChannelPreset::red().wavelength_nm, 650.0);
    EXPECT_EQ(ChannelPreset::red().attenuation_per_m, 0.3);
    EXPECT_EQ(ChannelPreset::green().wavelength_nm, 550.0);
    EXPECT_EQ(ChannelPreset::green().attenuation_per_m, 0.07);
    EXPECT_EQ(ChannelPreset::blue().wavelength_nm, 450.0);
    EXPECT_EQ(ChannelPreset::blue().attenuation_per_m, 0.02);
}

TEST(ChannelPreset, AttenuationOrderedRedGreenBlue) {
    EXPECT_GT(ChannelPreset::red().attenuation_per_m, ChannelPreset::green().attenuation_per_m);
    EXPECT_GT(ChannelPreset::green().attenuation_per_m, ChannelPreset::blue().attenuation_per_m);
}

TEST(ChannelPreset, FromName) {
    EXPECT_EQ(ChannelPreset::from_name("red").label, ChannelColor::Red);
    EXPECT_EQ(ChannelPreset::from_name("green").label, ChannelColor::Green);
    EXPECT_EQ(ChannelPreset::from_name("blue").label, ChannelColor::Blue);
    EXPECT_THROW(ChannelPreset::from_name("violet"), ConfigError);
}

TEST(ChannelPreset, CustomAcceptsZeroRejectsNegative) {
    EXPECT_EQ(ChannelPreset::custom(0.0).attenuation_per_m, 0.0);
    EXPECT_EQ(ChannelPreset::custom(0.15, 520.0).wavelength_nm, 520.0);
    EXPECT_THROW(ChannelPreset::custom(-0.1), std::domain_error);
}

TEST(WaterTypes, WavelengthBands) {
    const WaterType pure = water_type(WaterKind::PureSeafloor);
    EXPECT_EQ(pure.band_low_nm, 450.0);
    EXPECT_EQ(pure.band_high_nm, 500.0);
    for (WaterKind k : {WaterKind::ShallowSea, WaterKind::Dirty}) {
        EXPECT_EQ(water_type(k).band_low_nm, 520.0);
        EXPECT_EQ(water_type(k).band_high_nm, 570.0);
    }
}

TEST(ReceivedPower, KnownValues) {
    EXPECT_DOUBLE_EQ(received_power(0.5, 0.02, 0.0), 0.5);
    EXPECT_DOUBLE_EQ(received_power(0.5, 0.0, 100.0), 0.5);
    // 0.5 * exp(-1)
    EXPECT_NEAR(received_power(0.5, 0.02, 50.0), 0.18393972058572117, 1e-15);
}

TEST(ReceivedPower, RejectsNegativeInputs) {
    EXPECT_THROW(received_power(-1.0, 0.02, 1.0), std::domain_error);
    EXPECT_THROW(received_power(1.0, -0.02, 1.0), std::domain_error);
    EXPECT_THROW(received_power(1.0, 0.02, -1.0), std::domain_error);
}

TEST(ReceivedPower, StrictlyDecreasingInDistance) {
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> power(0.01, 5.0);
    std::uniform_real_distribution<double> atten(0.001, 0.5);
    std::uniform_real_distribution<double> dist(0.0, 200.0);
    for (int i = 0; i < 500; ++i) {
        const double p0 = power(gen), k = atten(gen);
        double d1 = dist(gen), d2 = dist(gen);
        if (d1 == d2) continue;
        if (d1 > d2) std::swap(d1, d2);
        EXPECT_GT(received_power(p0, k, d1), received_power(p0, k, d2));
    }
}

TEST(ReceivedPower, BoundedByTransmitPower) {
    std::mt19937 gen(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double p0 = 3.0 * u(gen), k = 0.4 * u(gen), d = 150.0 * u(gen);
        const double pd = received_power(p0, k, d);
        EXPECT_GE(pd, 0.0);
        EXPECT_LE(pd, p0);
    }
}

TEST(BeamAttenuation, SumsComponents) {
    EXPECT_DOUBLE_EQ(beam_attenuation(0.0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(beam_attenuation(0.05, 0.02), 0.07);
    EXPECT_DOUBLE_EQ(beam_attenuation(0.25, 0.05), 0.30);
    EXPECT_THROW(beam_attenuation(-0.1, 0.0), std::domain_error);
    EXPECT_THROW(beam_attenuation(0.1, -0.2), std::domain_error);
}

TEST(BeamAttenuation, ExponentialSplitsMultiplicatively) {
    // exp(-(a+s)d) == exp(-a d) * exp(-s d)
    std::mt19937 gen(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double p0 = 0.1 + u(gen), a = 0.3 * u(gen), s = 0.3 * u(gen), d = 100.0 * u(gen);
        const double combined = received_power(p0, beam_attenuation(a, s), d);
        const double chained = received_power(received_power(p0, a, d), s, d);
        EXPECT_NEAR(combined / chained, 1.0, 1e-12);
    }
}

TEST(AbsorptionCoefficient, LinearInTemperature) {
    EXPECT_DOUBLE_EQ(absorption_coefficient({0.02, 0.0, 0.001, 0.0}), 0.02);
    EXPECT_DOUBLE_EQ(absorption_coefficient({0.02, 10.0, 0.001, 0.0}), 0.03);
}

TEST(AbsorptionCoefficient, RejectsNegativeResult) {
    EXPECT_THROW(absorption_coefficient({0.01, -20.0, 0.001, 0.0}), std::domain_error);
    EXPECT_THROW(absorption_coefficient({-0.01, 0.0, 0.0, 0.0}), std::domain_error);
    EXPECT_THROW(absorption_coefficient({0.01, 0.0, 0.0, -0.5}), std::domain_error);
}

TEST(AbsorptionCoefficient, ComposesIntoBeamAttenuation) {
    const AbsorptionModel m{0.05, 10.0, 0.002, 0.01};
    EXPECT_NEAR(beam_attenuation(absorption_coefficient(m), m.scattering_per_m), 0.08, 1e-15);
}

} // namespace
