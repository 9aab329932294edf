#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "polarslit/polarization.hpp"

namespace polarslit {

/// Paraxial approximation is flagged once d/D exceeds this ratio.
inline constexpr double kParaxialWarningRatio = 0.01;

/**
 * Point double slit and screen.
 *
 * Slit 1 sits at transverse coordinate +d/2 and slit 2 at -d/2, so the path
 * difference l2 - l1 is positive above the axis.
 */
template <typename Scalar = double>
struct SlitGeometry {
    Scalar slit_separation = Scalar(100e-6);  // d [m]
    Scalar screen_distance = Scalar(1);       // D [m]
    Scalar wavelength = Scalar(500e-9);       // lambda [m]

    static SlitGeometry make(Scalar d, Scalar D, Scalar lambda) {
        SlitGeometry g{d, D, lambda};
        g.validate();
        return g;
    }

    void validate() const {
        auto positive = [](Scalar v) { return std::isfinite(v) && v > Scalar(0); };
        if (!positive(slit_separation)) throw std::domain_error("slit separation must be > 0");
        if (!positive(screen_distance)) throw std::domain_error("screen distance must be > 0");
        if (!positive(wavelength)) throw std::domain_error("wavelength must be > 0");
    }

    Scalar paraxial_ratio() const { return slit_separation / screen_distance; }
    bool paraxial_warning() const { return paraxial_ratio() > Scalar(kParaxialWarningRatio); }

    Scalar wavenumber() const { return Scalar(2) * std::numbers::pi_v<Scalar> / wavelength; }

    /// lambda * D / d
    Scalar fringe_spacing() const { return wavelength * screen_distance / slit_separation; }

    bool operator==(SlitGeometry const&) const = default;
};

/// Slit geometry, optional polarizer per slit, and the normalized input beam.
template <typename Scalar = double>
struct ApparatusConfig {
    SlitGeometry<Scalar> geometry;
    std::optional<PolarizerAxis<Scalar>> polarizer1;
    std::optional<PolarizerAxis<Scalar>> polarizer2;
    PolarizationState<Scalar> input = PolarizationState<Scalar>::from_components(Scalar(1), Scalar(0));

    bool operator==(ApparatusConfig const&) const = default;
};

enum class DeltaMode { exact, paraxial };

template <typename Scalar>
struct PathLengths {
    Scalar slit1;
    Scalar slit2;
};

template <typename Scalar>
PathLengths<Scalar> path_lengths(SlitGeometry<Scalar> const& g, Scalar x) {
    Scalar const half = g.slit_separation / Scalar(2);
    Scalar const D = g.screen_distance;
    return {std::hypot(D, x - half), std::hypot(D, x + half)};
}

/**
 * l2 - l1 at screen coordinate x.
 *
 * Exact mode uses l2 - l1 = 2xd / (l1 + l2), which avoids the cancellation of
 * subtracting two nearly equal lengths.
 */
template <typename Scalar>
Scalar path_difference(SlitGeometry<Scalar> const& g, Scalar x, DeltaMode mode) {
    if (mode == DeltaMode::paraxial) {
        return x * g.slit_separation / g.screen_distance;
    }
    auto const l = path_lengths(g, x);
    return Scalar(2) * x * g.slit_separation / (l.slit1 + l.slit2);
}

}  // namespace polarslit
