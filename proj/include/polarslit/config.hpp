#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "polarslit/apparatus.hpp"
#include "polarslit/eraser.hpp"
#include "polarslit/montecarlo.hpp"
#include "polarslit/polarization.hpp"
#include "polarslit/screenfield.hpp"

namespace polarslit {

/// Everything a run needs; every field has a documented default.
struct ExperimentConfig {
    std::complex<double> a{1.0, 0.0};
    std::complex<double> b{0.0, 0.0};

    double d = 100e-6;
    double screen_distance = 1.0;
    double wavelength = 500e-9;

    std::optional<PolarizerAxis<double>> theta1;
    std::optional<PolarizerAxis<double>> theta2;

    double half_width = 0.02;
    std::size_t points = 2001;

    DeltaMode delta = DeltaMode::paraxial;
    IntensityMode intensity = IntensityMode::averaged;
    Detector<double> detector;

    std::int64_t photons = 1000000;
    std::uint64_t seed = 1;
    std::size_t bins = 100;

    PolarizerAxis<double> p_basis;
    Outcome p_outcome = Outcome::plus;
    SAnalyzer s_analyzer = SAnalyzer::none;

    std::size_t sweep_points = 181;

    bool operator==(ExperimentConfig const&) const = default;

    SlitGeometry<double> geometry() const { return {d, screen_distance, wavelength}; }
    ApparatusConfig<double> apparatus() const;
    ScreenGrid grid() const { return {half_width, points}; }
    ScreenOptions screen_options() const { return {intensity, delta}; }
    ScreenWindow window() const { return {half_width, bins}; }
    EraserSetup<double> eraser() const { return {geometry(), p_basis, s_analyzer}; }
};

/// Config problem tied to a line (0 when the problem spans several keys).
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string const& message, std::size_t line, std::string key);

    std::size_t line() const { return line_; }
    std::string const& key() const { return key_; }

private:
    std::size_t line_;
    std::string key_;
};

/**
 * Parses the line-oriented `key = value` format.
 *
 * `#` starts a comment, blank lines are ignored, angles are radians unless the
 * key ends in `_deg`, and unknown or repeated keys are rejected.
 */
ExperimentConfig parse_config(std::string_view text);

/// Canonical rendering: every key, fixed order, shortest round-trip numbers.
std::string render_config(ExperimentConfig const& config);

/// Shortest decimal representation that parses back to the same double.
std::string format_number(double v);

}  // namespace polarslit
