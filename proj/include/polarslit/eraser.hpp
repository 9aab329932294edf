#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "polarslit/apparatus.hpp"
#include "polarslit/polarization.hpp"
#include "polarslit/screenfield.hpp"

// Entangled-pair eraser: photon s crosses the double slit behind circular
// converters (slit 1: V->L, H->R; slit 2: V->R, H->L) while its partner p,
// anticorrelated in V/H, is analyzed in a rotated linear basis. Statistics
// only; the temporal order of the two measurements does not enter.

namespace polarslit {

enum class Circular : int { L = 0, R = 1 };

/// Port of the beam-p analyzer: plus is the basis angle, minus the angle + pi/2.
enum class Outcome : int { plus = 0, minus = 1 };

enum class SAnalyzer { L, R, none };

template <typename Scalar = double>
struct EraserSetup {
    SlitGeometry<Scalar> geometry;
    PolarizerAxis<Scalar> p_basis;  // analyzer basis {angle, angle + pi/2}
    SAnalyzer s_analyzer = SAnalyzer::none;

    bool operator==(EraserSetup const&) const = default;
};

/// amp(slit, s circular state, p outcome) of the joint two-photon state.
template <typename Scalar = double>
struct JointAmplitudes {
    Eigen::Matrix<Complex<Scalar>, 8, 1> amps = Eigen::Matrix<Complex<Scalar>, 8, 1>::Zero();

    static constexpr int index(Slit k, Circular c, Outcome o) {
        return 4 * static_cast<int>(k) + 2 * static_cast<int>(c) + static_cast<int>(o);
    }

    Complex<Scalar>& operator()(Slit k, Circular c, Outcome o) { return amps(index(k, c, o)); }
    Complex<Scalar> operator()(Slit k, Circular c, Outcome o) const { return amps(index(k, c, o)); }

    Scalar norm2() const { return amps.squaredNorm(); }
};

/**
 * Joint state for (|V>_s|H>_p + |H>_s|V>_p)/sqrt2 after the slits and
 * converters, with p expanded in the {angle, angle + pi/2} basis.
 */
template <typename Scalar>
JointAmplitudes<Scalar> eraser_joint_state(PolarizerAxis<Scalar> const& p_basis) {
    Scalar const phi = p_basis.angle();
    // <plus|V>, <minus|V>, <plus|H>, <minus|H>
    Scalar const plus_v = std::cos(phi), minus_v = -std::sin(phi);
    Scalar const plus_h = std::sin(phi), minus_h = std::cos(phi);
    // 1/sqrt2 from the pair state times 1/sqrt2 from the slit split
    Scalar const w = Scalar(0.5);

    JointAmplitudes<Scalar> j;
    // slit 1: V_s -> L with p = H, H_s -> R with p = V
    j(Slit::one, Circular::L, Outcome::plus) = w * plus_h;
    j(Slit::one, Circular::L, Outcome::minus) = w * minus_h;
    j(Slit::one, Circular::R, Outcome::plus) = w * plus_v;
    j(Slit::one, Circular::R, Outcome::minus) = w * minus_v;
    // slit 2: V_s -> R with p = H, H_s -> L with p = V
    j(Slit::two, Circular::R, Outcome::plus) = w * plus_h;
    j(Slit::two, Circular::R, Outcome::minus) = w * minus_h;
    j(Slit::two, Circular::L, Outcome::plus) = w * plus_v;
    j(Slit::two, Circular::L, Outcome::minus) = w * minus_v;
    return j;
}

template <typename Scalar>
JointAmplitudes<Scalar> eraser_joint_state(Scalar p_basis_angle) {
    return eraser_joint_state(PolarizerAxis<Scalar>(p_basis_angle));
}

/**
 * Screen profile of s photons in coincidence with p outcome `o`.
 *
 * The analyzed circular field is split into its V/H sector columns
 * (L = (V + iH)/sqrt2, R = (V - iH)/sqrt2); i_total is the analyzed intensity.
 */
template <typename Scalar>
IntensityProfile<Scalar> coincidence_profile(EraserSetup<Scalar> const& setup, Outcome o,
                                             ScreenGrid const& grid, DeltaMode delta = DeltaMode::paraxial) {
    setup.geometry.validate();
    auto const joint = eraser_joint_state(setup.p_basis);
    bool const keep_l = setup.s_analyzer != SAnalyzer::R;
    bool const keep_r = setup.s_analyzer != SAnalyzer::L;
    Scalar const r = Scalar(1) / std::sqrt(Scalar(2));
    Complex<Scalar> const i(0, 1);

    IntensityProfile<Scalar> out;
    out.xs = grid_points<Scalar>(grid);
    auto const n = out.xs.size();
    out.i_v.resize(n);
    out.i_h.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Scalar const half = detail::half_phase_at(setup.geometry, out.xs(j), delta);
        Complex<Scalar> const lag(std::cos(half), std::sin(half));
        auto field = [&](Circular c) {
            return joint(Slit::one, c, o) * std::conj(lag) + joint(Slit::two, c, o) * lag;
        };
        Complex<Scalar> const psi_l = keep_l ? field(Circular::L) : Complex<Scalar>(0);
        Complex<Scalar> const psi_r = keep_r ? field(Circular::R) : Complex<Scalar>(0);
        out.i_v(j) = std::norm(r * (psi_l + psi_r));
        out.i_h(j) = std::norm(i * r * (psi_l - psi_r));
    }
    out.i_total = out.i_v + out.i_h;
    out.meta.options.delta = delta;
    return out;
}

/// Coincidence profiles summed over both p outcomes.
template <typename Scalar>
IntensityProfile<Scalar> marginal_profile(EraserSetup<Scalar> const& setup, ScreenGrid const& grid,
                                          DeltaMode delta = DeltaMode::paraxial) {
    auto out = coincidence_profile(setup, Outcome::plus, grid, delta);
    auto const minus = coincidence_profile(setup, Outcome::minus, grid, delta);
    out.i_v += minus.i_v;
    out.i_h += minus.i_h;
    out.i_total += minus.i_total;
    return out;
}

}  // namespace polarslit
