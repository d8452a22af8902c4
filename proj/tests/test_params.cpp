#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "optoent/params.hpp"

using namespace optoent;

namespace {

constexpr double kOmegaM = constants::two_pi * 3.6e9;

} // namespace

TEST(DefaultParams, TableValues) {
    const PhysicalParams p = default_params();
    EXPECT_DOUBLE_EQ(constants::rad_to_hz(p.omega_m), 3.6e9);
    EXPECT_DOUBLE_EQ(constants::rad_to_hz(p.gamma_m), 35e3);
    EXPECT_DOUBLE_EQ(constants::rad_to_hz(p.g_m), 910e3);
    EXPECT_DOUBLE_EQ(p.kappa, constants::pi * 529e6);
    EXPECT_EQ(p.kappa_convention, KappaConvention::pi);
    EXPECT_DOUBLE_EQ(p.power, 0.7e-3);
    EXPECT_DOUBLE_EQ(p.temperature, 0.270);
    EXPECT_DOUBLE_EQ(p.beta, 0.0);
    EXPECT_DOUBLE_EQ(p.laser_wavelength, 1.55e-6);
    EXPECT_DOUBLE_EQ(p.eta_factor, 2.0);
    EXPECT_NO_THROW(validate(p));
}

TEST(DefaultParams, QualityFactorFromRates) {
    // 3.6 GHz / 35 kHz; the table's rounded 1.05e5 is not reproduced.
    const PhysicalParams p = default_params();
    EXPECT_NEAR(p.q_factor(), 3.6e9 / 35e3, 1e-6);
    EXPECT_NEAR(p.q_factor(), 1.03e5, 0.01e5);
    EXPECT_DOUBLE_EQ(derive(p).q_factor, p.q_factor());
}

TEST(ThermalOccupation, ZeroTemperatureIsExactlyZero) {
    EXPECT_EQ(thermal_occupation(0.0, kOmegaM), 0.0);
    EXPECT_EQ(thermal_occupation(0.0, 1.0), 0.0);
}

TEST(ThermalOccupation, FrozenHighPrecisionValues) {
    // 40-digit evaluations of 1/(exp(hbar W / kB T) - 1) with CODATA 2018.
    EXPECT_NEAR(thermal_occupation(0.270, kOmegaM), 1.1157109535263912, 1e-12 * 1.1157);
    EXPECT_NEAR(thermal_occupation(98.0, kOmegaM), 566.71922339817098, 1e-12 * 566.7);
}

TEST(ThermalOccupation, MonotoneAndClassicalLimit) {
    double prev = 0.0;
    for (double t = 0.01; t < 1000.0; t *= 1.3) {
        const double n = thermal_occupation(t, kOmegaM);
        EXPECT_GT(n, prev);
        prev = n;
        EXPECT_GT(thermal_occupation(t, kOmegaM), thermal_occupation(t, 1.1 * kOmegaM));
        if (n > 50.0) {
            const double classical = constants::k_boltzmann * t / (constants::hbar * kOmegaM) - 0.5;
            EXPECT_LT(std::abs(n - classical) / n, 0.01);
        }
    }
}

TEST(InverseThermalOccupation, FrozenValues) {
    EXPECT_NEAR(inverse_thermal_occupation(1.116, kOmegaM), 0.27005166650791141, 1e-12);
    EXPECT_NEAR(inverse_thermal_occupation(2500.0, kOmegaM), 432.01825695563447, 1e-9);
    EXPECT_NEAR(inverse_thermal_occupation(600.0, kOmegaM), 103.75001272022174, 1e-9);
}

TEST(InverseThermalOccupation, RoundTrip) {
    for (double x : {0.1, 1.0, 600.0, 2500.0, 1e-3, 1e4}) {
        const double t = inverse_thermal_occupation(x, kOmegaM);
        EXPECT_NEAR(thermal_occupation(t, kOmegaM) / x, 1.0, 1e-12) << x;
    }
}

TEST(InverseThermalOccupation, RejectsNonPositive) {
    EXPECT_THROW(inverse_thermal_occupation(0.0, kOmegaM), ConfigError);
    EXPECT_THROW(inverse_thermal_occupation(-1.0, kOmegaM), ConfigError);
}

TEST(DriveAmplitude, UndrivenIsZero) { EXPECT_EQ(drive_amplitude(0.0, 1e9, 1e15), 0.0); }

TEST(DriveAmplitude, FrozenValue) {
    const double omega_l = constants::two_pi * constants::speed_of_light / 1.55e-6;
    EXPECT_NEAR(drive_amplitude(10e-3, constants::two_pi * 529e6, omega_l), 2.2775097825482839e13, 1e-12 * 2.28e13);
}

TEST(DriveAmplitude, SquareRootScalingAndIdentity) {
    const double omega_l = constants::two_pi * constants::speed_of_light / 1.55e-6;
    const double kappa = constants::pi * 529e6;
    for (double p : {1e-6, 0.7e-3, 10e-3, 1.0}) {
        EXPECT_NEAR(drive_amplitude(4.0 * p, kappa, omega_l) / drive_amplitude(p, kappa, omega_l), 2.0, 1e-14);
        const double e0 = drive_amplitude(p, kappa, omega_l);
        EXPECT_NEAR(e0 * e0 * constants::hbar * omega_l / (2.0 * p * kappa), 1.0, 1e-14);
    }
}

TEST(Validate, RejectsBadFields) {
    auto with = [](auto mutate) {
        PhysicalParams p = default_params();
        mutate(p);
        return p;
    };
    EXPECT_THROW(validate(with([](auto& p) { p.beta = 1.0; })), ConfigError);
    EXPECT_THROW(validate(with([](auto& p) { p.beta = 1.5; })), ConfigError);
    EXPECT_THROW(validate(with([](auto& p) { p.omega_m = 0.0; })), ConfigError);
    EXPECT_THROW(validate(with([](auto& p) { p.gamma_m = -1.0; })), ConfigError);
    EXPECT_THROW(validate(with([](auto& p) { p.kappa = 0.0; })), ConfigError);
    EXPECT_THROW(validate(with([](auto& p) { p.power = -1e-3; })), ConfigError);
    EXPECT_THROW(validate(with([](auto& p) { p.temperature = -1.0; })), ConfigError);
    EXPECT_THROW(validate(with([](auto& p) { p.laser_wavelength = 0.0; })), ConfigError);
    EXPECT_NO_THROW(validate(with([](auto& p) { p.beta = -0.5; })));
    EXPECT_NO_THROW(validate(with([](auto& p) { p.temperature = 0.0; })));
}

TEST(Config, ParsesAllKeysInHz) {
    std::istringstream in(R"(# device
omega_m_hz = 1e9
gamma_m_hz = 1e3
g0_hz = 2e5
kappa_hz = 100e6
kappa_convention = two_pi
power_w = 0.01   # 10 mW
wavelength_m = 1.064e-6
temperature_k = 4
beta = 0.3
eta_factor = 1
cm_scale = 1
)");
    const PhysicalParams p = parse_config(in);
    EXPECT_DOUBLE_EQ(p.omega_m, constants::two_pi * 1e9);
    EXPECT_DOUBLE_EQ(p.gamma_m, constants::two_pi * 1e3);
    EXPECT_DOUBLE_EQ(p.g_m, constants::two_pi * 2e5);
    EXPECT_DOUBLE_EQ(p.kappa, constants::two_pi * 100e6);
    EXPECT_EQ(p.kappa_convention, KappaConvention::two_pi);
    EXPECT_DOUBLE_EQ(p.power, 0.01);
    EXPECT_DOUBLE_EQ(p.laser_wavelength, 1.064e-6);
    EXPECT_DOUBLE_EQ(p.temperature, 4.0);
    EXPECT_DOUBLE_EQ(p.beta, 0.3);
    EXPECT_DOUBLE_EQ(p.eta_factor, 1.0);
    EXPECT_DOUBLE_EQ(p.cm_scale, 1.0);
}

TEST(Config, ConventionAloneReinterpretsDefaultLinewidth) {
    std::istringstream in("kappa_convention = two_pi\n");
    EXPECT_DOUBLE_EQ(parse_config(in).kappa, constants::two_pi * 529e6);
}

TEST(Config, Errors) {
    auto parse = [](const char* text) {
        std::istringstream in(text);
        return parse_config(in);
    };
    EXPECT_THROW(parse("bogus = 1\n"), ConfigError);
    EXPECT_THROW(parse("beta 0.2\n"), ConfigError);
    EXPECT_THROW(parse("beta = abc\n"), ConfigError);
    EXPECT_THROW(parse("beta = 1.0\n"), ConfigError);
    EXPECT_THROW(parse("kappa_convention = half\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/optoent.cfg"), IoError);
}
