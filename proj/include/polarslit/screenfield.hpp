#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

#include "polarslit/apparatus.hpp"
#include "polarslit/polarization.hpp"

namespace polarslit {

enum class Slit : int { one = 0, two = 1 };
enum class Sector : int { V = 0, H = 1 };

/**
 * Slit-plane amplitudes of the four (slit, polarization) path states.
 *
 * Row k is the (unnormalized) Jones vector that leaves slit k+1.
 */
template <typename Scalar = double>
struct SectorAmplitudes {
    Eigen::Matrix<Complex<Scalar>, 2, 2> amps = Eigen::Matrix<Complex<Scalar>, 2, 2>::Zero();

    static SectorAmplitudes make(Complex<Scalar> a1V, Complex<Scalar> a1H, Complex<Scalar> a2V,
                                 Complex<Scalar> a2H) {
        SectorAmplitudes s;
        s.amps << a1V, a1H, a2V, a2H;
        return s;
    }

    Complex<Scalar> operator()(Slit k, Sector p) const {
        return amps(static_cast<int>(k), static_cast<int>(p));
    }

    Complex<Scalar> a1V() const { return amps(0, 0); }
    Complex<Scalar> a1H() const { return amps(0, 1); }
    Complex<Scalar> a2V() const { return amps(1, 0); }
    Complex<Scalar> a2H() const { return amps(1, 1); }

    Jones<Scalar> slit(Slit k) const { return amps.row(static_cast<int>(k)).transpose(); }
};

enum class IntensityMode {
    averaged,           // time-averaged |E|^2
    instantaneous // real-cosine bracket [A1 + A2 cos(k delta)]^2
};

struct ScreenOptions {
    IntensityMode intensity = IntensityMode::averaged;
    DeltaMode delta = DeltaMode::paraxial;

    bool operator==(ScreenOptions const&) const = default;
};

/// What the screen detector responds to.
template <typename Scalar = double>
struct Detector {
    enum class Kind { total, V, H, axis };

    Kind kind = Kind::total;
    Scalar angle = Scalar(0);  // only for Kind::axis, reduced mod pi

    static Detector total() { return {}; }
    static Detector vertical() { return {Kind::V, Scalar(0)}; }
    static Detector horizontal() { return {Kind::H, Scalar(0)}; }
    static Detector along(Scalar phi) { return {Kind::axis, PolarizerAxis<Scalar>::reduce(phi)}; }

    bool operator==(Detector const&) const = default;
};

struct ScreenGrid {
    double half_width = 0.02;
    std::size_t n_points = 2001;

    void validate() const {
        if (!(std::isfinite(half_width) && half_width > 0.0)) {
            throw std::domain_error("grid half_width must be > 0");
        }
        if (n_points < 2) throw std::domain_error("grid needs at least 2 points");
    }

    bool operator==(ScreenGrid const&) const = default;
};

/// Uniform grid on [-half_width, +half_width], both endpoints included.
template <typename Scalar = double>
Eigen::Array<Scalar, Eigen::Dynamic, 1> grid_points(ScreenGrid const& grid) {
    grid.validate();
    Scalar const hw = Scalar(grid.half_width);
    auto const n = static_cast<Eigen::Index>(grid.n_points);
    Eigen::Array<Scalar, Eigen::Dynamic, 1> xs(n);
    Scalar const step = Scalar(2) * hw / Scalar(n - 1);
    for (Eigen::Index j = 0; j < n; ++j) xs(j) = -hw + step * Scalar(j);
    // pin the last point so round-off never leaves the window
    xs(n - 1) = hw;
    return xs;
}

template <typename Scalar = double>
struct ProfileSource {
    ScreenOptions options;
    std::optional<ApparatusConfig<Scalar>> apparatus;  // empty for eraser profiles
    Detector<Scalar> detector;
};

/**
 * Screen intensity on a uniform grid, split into V and H sectors.
 *
 * For an analyzing detector the sector columns hold the detected component
 * and the blocked one is zero, so i_total = i_v + i_h always holds.
 */
template <typename Scalar = double>
struct IntensityProfile {
    using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

    Array xs;
    Array i_v;
    Array i_h;
    Array i_total;
    ProfileSource<Scalar> meta;

    Eigen::Index size() const { return xs.size(); }
    Scalar step() const { return (xs(size() - 1) - xs(0)) / Scalar(size() - 1); }
};

template <typename Scalar>
SectorAmplitudes<Scalar> sector_amplitudes(ApparatusConfig<Scalar> const& config) {
    Scalar const split = Scalar(1) / std::sqrt(Scalar(2));
    PolarizationState<Scalar> through;
    through.jones = config.input.jones * split;

    auto pass = [&](std::optional<PolarizerAxis<Scalar>> const& pol) {
        return pol ? project_polarizer(through, *pol).state.jones : through.jones;
    };

    SectorAmplitudes<Scalar> out;
    out.amps.row(0) = pass(config.polarizer1).transpose();
    out.amps.row(1) = pass(config.polarizer2).transpose();
    return out;
}

/// Probability that a photon of the normalized input leaves the slit plane.
template <typename Scalar>
Scalar transmission(SectorAmplitudes<Scalar> const& amps) {
    return amps.amps.cwiseAbs2().sum();
}

namespace detail {

/**
 * Two-source intensity with slit 2 lagging by phase k*delta.
 *
 * The phase is split symmetrically, |a1 e^{-i phi/2} + a2 e^{+i phi/2}|^2, so
 * equal amplitudes give 4|a|^2 cos^2(phi/2) without cancellation at nodes.
 */
template <typename Scalar>
Scalar two_source_intensity(Complex<Scalar> a1, Complex<Scalar> a2, Scalar half_phase,
                            IntensityMode mode) {
    if (mode == IntensityMode::instantaneous) {
        Scalar const bracket = std::abs(a1) + std::abs(a2) * std::cos(Scalar(2) * half_phase);
        return bracket * bracket;
    }
    Complex<Scalar> const lag(std::cos(half_phase), std::sin(half_phase));
    return std::norm(a1 * std::conj(lag) + a2 * lag);
}

template <typename Scalar>
Scalar half_phase_at(SlitGeometry<Scalar> const& g, Scalar x, DeltaMode mode) {
    return std::numbers::pi_v<Scalar> * path_difference(g, x, mode) / g.wavelength;
}

}  // namespace detail

template <typename Scalar>
struct SectorIntensity {
    Scalar v;
    Scalar h;
};

template <typename Scalar>
SectorIntensity<Scalar> intensity_at(SectorAmplitudes<Scalar> const& amps,
                                     SlitGeometry<Scalar> const& geometry, Scalar x,
                                     ScreenOptions const& options = {}) {
    Scalar const half = detail::half_phase_at(geometry, x, options.delta);
    return {detail::two_source_intensity(amps.a1V(), amps.a2V(), half, options.intensity),
            detail::two_source_intensity(amps.a1H(), amps.a2H(), half, options.intensity)};
}

/// Amplitudes re-expressed in the (phi, phi + pi/2) analyzer basis; column 0 is phi.
template <typename Scalar>
SectorAmplitudes<Scalar> rotate_sectors(SectorAmplitudes<Scalar> const& amps, Scalar phi) {
    Scalar const c = std::cos(phi);
    Scalar const s = std::sin(phi);
    Eigen::Matrix<Scalar, 2, 2> to_basis;
    to_basis << c, -s, s, c;
    SectorAmplitudes<Scalar> out;
    out.amps = amps.amps * to_basis.template cast<Complex<Scalar>>();
    return out;
}

template <typename Scalar>
IntensityProfile<Scalar> profile(ApparatusConfig<Scalar> const& config, ScreenGrid const& grid,
                                 Detector<Scalar> const& detector = {},
                                 ScreenOptions const& options = {}) {
    config.geometry.validate();
    using Kind = typename Detector<Scalar>::Kind;

    SectorAmplitudes<Scalar> amps = sector_amplitudes(config);
    if (detector.kind == Kind::axis) amps = rotate_sectors(amps, detector.angle);

    IntensityProfile<Scalar> out;
    out.xs = grid_points<Scalar>(grid);
    auto const n = out.xs.size();
    out.i_v.resize(n);
    out.i_h.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        auto const s = intensity_at(amps, config.geometry, out.xs(j), options);
        out.i_v(j) = s.v;
        out.i_h(j) = s.h;
    }
    switch (detector.kind) {
        case Kind::total: break;
        case Kind::V:
        case Kind::axis: out.i_h.setZero(); break;
        case Kind::H: out.i_v.setZero(); break;
    }
    out.i_total = out.i_v + out.i_h;
    out.meta = ProfileSource<Scalar>{options, config, detector};
    return out;
}

}  // namespace polarslit
