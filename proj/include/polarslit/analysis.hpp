#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string_view>

#include <Eigen/Dense>

#include "polarslit/apparatus.hpp"
#include "polarslit/screenfield.hpp"

namespace polarslit {

/// Total visibility below this means "no fringes" (no spacing is reported).
inline constexpr double kFringelessVisibility = 1e-9;

template <typename Scalar = double>
struct VisibilityReport {
    Scalar v_sector = Scalar(0);
    Scalar h_sector = Scalar(0);
    Scalar total = Scalar(0);
    std::optional<Scalar> fringe_spacing;
};

/// 2|a1||a2| / (|a1|^2 + |a2|^2); zero when both amplitudes vanish.
template <typename Scalar>
Scalar sector_visibility(Complex<Scalar> a_slit1, Complex<Scalar> a_slit2) {
    Scalar const m1 = std::abs(a_slit1);
    Scalar const m2 = std::abs(a_slit2);
    Scalar const den = m1 * m1 + m2 * m2;
    if (den == Scalar(0)) return Scalar(0);
    return Scalar(2) * m1 * m2 / den;
}

namespace detail {

template <typename Scalar>
struct Refined {
    Scalar offset;  // in grid steps, relative to the sample index
    Scalar value;
};

/**
 * Local polynomial refinement of a discrete extremum at index j.
 *
 * Uses the quartic through five samples when available, otherwise the
 * parabola through three; endpoints are returned as sampled.
 */
template <typename Scalar>
Refined<Scalar> refine_extremum(Eigen::Array<Scalar, Eigen::Dynamic, 1> const& y, Eigen::Index j) {
    Eigen::Index const n = y.size();
    if (j <= 0 || j >= n - 1) return {Scalar(0), y(j)};

    Scalar c1, c2, c3 = 0, c4 = 0;
    if (j >= 2 && j <= n - 3) {
        Scalar const m2 = y(j - 2), m1 = y(j - 1), z = y(j), p1 = y(j + 1), p2 = y(j + 2);
        c1 = (m2 - Scalar(8) * m1 + Scalar(8) * p1 - p2) / Scalar(12);
        c2 = (-m2 + Scalar(16) * m1 - Scalar(30) * z + Scalar(16) * p1 - p2) / Scalar(24);
        c3 = (-m2 + Scalar(2) * m1 - Scalar(2) * p1 + p2) / Scalar(12);
        c4 = (m2 - Scalar(4) * m1 + Scalar(6) * z - Scalar(4) * p1 + p2) / Scalar(24);
    } else {
        c1 = (y(j + 1) - y(j - 1)) / Scalar(2);
        c2 = (y(j + 1) - Scalar(2) * y(j) + y(j - 1)) / Scalar(2);
    }
    if (c2 == Scalar(0)) return {Scalar(0), y(j)};

    auto poly = [&](Scalar t) { return y(j) + t * (c1 + t * (c2 + t * (c3 + t * c4))); };
    Scalar t = -c1 / (Scalar(2) * c2);
    for (int it = 0; it < 8 && std::abs(t) <= Scalar(1); ++it) {
        Scalar const d1 = c1 + t * (Scalar(2) * c2 + t * (Scalar(3) * c3 + t * Scalar(4) * c4));
        Scalar const d2 = Scalar(2) * c2 + t * (Scalar(6) * c3 + t * Scalar(12) * c4);
        if (d2 == Scalar(0)) break;
        t -= d1 / d2;
    }
    if (!(std::abs(t) <= Scalar(1))) return {Scalar(0), y(j)};
    return {t, poly(t)};
}

template <typename Scalar>
struct Extremes {
    Scalar max;
    Scalar min;
};

/// Global extremes over samples and refined interior local extrema.
template <typename Scalar>
Extremes<Scalar> refined_extremes(Eigen::Array<Scalar, Eigen::Dynamic, 1> const& y) {
    Eigen::Index const n = y.size();
    Extremes<Scalar> e{y.maxCoeff(), y.minCoeff()};
    for (Eigen::Index j = 1; j + 1 < n; ++j) {
        bool const peak = y(j) > y(j - 1) && y(j) >= y(j + 1);
        bool const trough = y(j) < y(j - 1) && y(j) <= y(j + 1);
        if (peak) e.max = std::max(e.max, refine_extremum(y, j).value);
        if (trough) e.min = std::min(e.min, refine_extremum(y, j).value);
    }
    // intensities are non-negative; refinement may undershoot a true zero
    e.min = std::max(e.min, Scalar(0));
    return e;
}

template <typename Scalar>
Scalar visibility_of(Eigen::Array<Scalar, Eigen::Dynamic, 1> const& y) {
    auto const e = refined_extremes(y);
    Scalar const den = e.max + e.min;
    if (!(den > Scalar(0))) return Scalar(0);
    return std::clamp((e.max - e.min) / den, Scalar(0), Scalar(1));
}

template <typename Scalar>
std::optional<Scalar> mean_peak_spacing(IntensityProfile<Scalar> const& p) {
    auto const& y = p.i_total;
    Eigen::Index const n = y.size();
    Scalar const h = p.step();
    std::optional<Scalar> first, last;
    Eigen::Index count = 0;
    for (Eigen::Index j = 1; j + 1 < n; ++j) {
        if (y(j) > y(j - 1) && y(j) >= y(j + 1)) {
            Scalar const x = p.xs(j) + refine_extremum(y, j).offset * h;
            if (!first) first = x;
            last = x;
            ++count;
        }
    }
    if (count < 2) return std::nullopt;
    return (*last - *first) / Scalar(count - 1);
}

}  // namespace detail

/**
 * Fringe visibility (Imax - Imin)/(Imax + Imin) per sector and in total.
 *
 * Extremes come from the grid samples refined by local polynomial
 * interpolation; the grid should span at least two fringes.
 */
template <typename Scalar>
VisibilityReport<Scalar> profile_visibility(IntensityProfile<Scalar> const& p) {
    if (p.size() < 3) throw std::domain_error("profile too short for visibility");
    if (!(p.i_total.abs().maxCoeff() > Scalar(0))) throw std::domain_error("dark screen");

    VisibilityReport<Scalar> r;
    r.v_sector = detail::visibility_of(p.i_v);
    r.h_sector = detail::visibility_of(p.i_h);
    r.total = detail::visibility_of(p.i_total);
    if (r.total >= Scalar(kFringelessVisibility)) r.fringe_spacing = detail::mean_peak_spacing(p);
    return r;
}

enum class WhichWayReason {
    none,              // interference survives
    a_zero,            // no vertical light reaches slit 1
    cos_theta_zero,    // slit-2 polarizer is horizontal
    projection_zero    // a cos(theta) + b sin(theta) = 0 blocks slit 2
};

inline std::string_view to_string(WhichWayReason r) {
    switch (r) {
        case WhichWayReason::none: return "none";
        case WhichWayReason::a_zero: return "a=0";
        case WhichWayReason::cos_theta_zero: return "cos(theta)=0";
        case WhichWayReason::projection_zero: return "a*cos(theta)+b*sin(theta)=0";
    }
    return "?";
}

struct WhichWay {
    bool interference;
    WhichWayReason reason;
};

/**
 * Decides whether the vertical sector interferes, for a vertical polarizer on
 * slit 1 with either a polarizer at theta or nothing on slit 2.
 */
template <typename Scalar>
WhichWay which_way_condition(ApparatusConfig<Scalar> const& config) {
    Scalar const tol = Scalar(kExactTolerance);
    if (!config.polarizer1 || std::abs(config.polarizer1->angle()) > tol) {
        throw std::domain_error("which-way analysis needs a vertical polarizer on slit 1");
    }
    Complex<Scalar> const a = config.input.v();
    Complex<Scalar> const b = config.input.h();
    if (std::abs(a) <= tol) return {false, WhichWayReason::a_zero};
    if (!config.polarizer2) return {true, WhichWayReason::none};

    Scalar const theta = config.polarizer2->angle();
    Scalar const c = std::cos(theta);
    if (std::abs(c) <= tol) return {false, WhichWayReason::cos_theta_zero};
    if (std::abs(a * c + b * std::sin(theta)) <= tol) return {false, WhichWayReason::projection_zero};
    return {true, WhichWayReason::none};
}

}  // namespace polarslit
