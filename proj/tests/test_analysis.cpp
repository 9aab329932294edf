#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "polarslit/analysis.hpp"

using namespace polarslit;
using C = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
double const kR = 1 / std::sqrt(2.0);

ApparatusConfig<double> two_polarizers(C a, C b, std::optional<double> theta) {
    ApparatusConfig<double> c;
    c.input = make_input_state(a, b);
    c.polarizer1 = PolarizerAxis<double>(0.0);
    if (theta) c.polarizer2 = PolarizerAxis<double>(*theta);
    return c;
}

// brute-force extremes of |a1 + a2 e^{i phi}|^2 over a dense phase scan
double scanned_visibility(C a1, C a2) {
    double lo = INFINITY, hi = 0;
    for (int k = 0; k < 200000; ++k) {
        double const phi = 2 * kPi * k / 200000.0;
        double const v = std::norm(a1 + a2 * std::polar(1.0, phi));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return (hi - lo) / (hi + lo);
}

}  // namespace

TEST_CASE("sector_visibility") {
    CHECK(sector_visibility(C(kR), C(kR)) == doctest::Approx(1.0));
    CHECK(sector_visibility(C(kR), C(0)) == 0.0);
    CHECK(sector_visibility(C(0), C(0)) == 0.0);
    CHECK(sector_visibility(C(0.5), C(0.25)) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(scanned_visibility(0.5, 0.25) == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("sector_visibility is scale invariant") {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 1000; ++i) {
        C const a(u(gen), u(gen)), b(u(gen), u(gen)), k(u(gen), u(gen));
        REQUIRE(std::abs(sector_visibility(a * k, b * k) - sector_visibility(a, b)) <= 1e-12);
    }
}

TEST_CASE("profile_visibility of the textbook pattern") {
    ApparatusConfig<double> textbook;
    auto const rep = profile_visibility(profile(textbook, ScreenGrid{0.02, 2001}));
    CHECK(std::abs(rep.total - 1.0) <= 1e-6);
    CHECK(std::abs(rep.v_sector - 1.0) <= 1e-6);
    CHECK(rep.h_sector == 0.0);
    REQUIRE(rep.fringe_spacing);
    CHECK(std::abs(*rep.fringe_spacing / textbook.geometry.fringe_spacing() - 1) <= 1e-6);
}

TEST_CASE("profile_visibility of the which-way and mixed arrangements") {
    ScreenGrid const grid{0.02, 2001};
    auto const ww = profile_visibility(profile(two_polarizers(1, 0, kPi / 2), grid));
    CHECK(ww.total <= 1e-9);
    CHECK_FALSE(ww.fringe_spacing);

    auto const mixed = profile_visibility(profile(two_polarizers(kR, kR, kPi / 4), grid));
    CHECK(std::abs(mixed.total - 2.0 / 3.0) <= 1e-6);
    CHECK(std::abs(mixed.v_sector - 1.0) <= 1e-6);
    CHECK(mixed.h_sector <= 1e-12);
}

TEST_CASE("profile_visibility errors") {
    IntensityProfile<double> dark;
    dark.xs = Eigen::ArrayXd::LinSpaced(11, -1, 1);
    dark.i_v = dark.i_h = dark.i_total = Eigen::ArrayXd::Zero(11);
    CHECK_THROWS_WITH_AS(profile_visibility(dark), "dark screen", std::domain_error);
}

TEST_CASE("profile visibility tracks the analytic sector visibility") {
    std::mt19937_64 gen(43);
    std::uniform_real_distribution<double> u(-1, 1);
    ScreenGrid const grid{0.02, 2001};
    for (int i = 0; i < 200; ++i) {
        auto const c = two_polarizers(C(u(gen), u(gen)), C(u(gen), u(gen)), kPi * u(gen));
        auto const amps = sector_amplitudes(c);
        auto const rep = profile_visibility(profile(c, grid));
        REQUIRE(rep.total >= 0);
        REQUIRE(rep.total <= 1 + 1e-12);
        REQUIRE(std::abs(rep.v_sector - sector_visibility(amps.a1V(), amps.a2V())) <= 1e-6);
        bool const no = !which_way_condition(c).interference;
        REQUIRE(no == (rep.v_sector <= 1e-9));
    }
}

TEST_CASE("fringe spacing at 64 points per fringe") {
    ApparatusConfig<double> textbook;
    double const spacing = textbook.geometry.fringe_spacing();
    ScreenGrid const grid{4 * spacing + 0.3 * spacing, static_cast<std::size_t>(64 * 8.6) + 1};
    auto const rep = profile_visibility(profile(textbook, grid));
    REQUIRE(rep.fringe_spacing);
    CHECK(std::abs(*rep.fringe_spacing / spacing - 1) <= 1e-4);
}

TEST_CASE("which_way_condition") {
    CHECK(which_way_condition(two_polarizers(1, 0, kPi / 4)).interference);
    auto const horizontal = which_way_condition(two_polarizers(1, 0, kPi / 2));
    CHECK_FALSE(horizontal.interference);
    CHECK(horizontal.reason == WhichWayReason::cos_theta_zero);
    auto const blocked = which_way_condition(two_polarizers(kR, -kR, kPi / 4));
    CHECK_FALSE(blocked.interference);
    CHECK(blocked.reason == WhichWayReason::projection_zero);
    auto const dark_slit = which_way_condition(two_polarizers(0, 1, 0.4));
    CHECK_FALSE(dark_slit.interference);
    CHECK(dark_slit.reason == WhichWayReason::a_zero);

    // single polarizer: only a = 0 removes the fringes
    CHECK(which_way_condition(two_polarizers(0.3, 0.9, std::nullopt)).interference);
    CHECK(which_way_condition(two_polarizers(0, 1, std::nullopt)).reason == WhichWayReason::a_zero);

    ApparatusConfig<double> open;
    CHECK_THROWS_AS(which_way_condition(open), std::domain_error);
    auto tilted = two_polarizers(1, 0, 0.3);
    tilted.polarizer1 = PolarizerAxis<double>(0.2);
    CHECK_THROWS_AS(which_way_condition(tilted), std::domain_error);
}

TEST_CASE("refinement recovers extremes between grid points") {
    // cos^2 sampled with its peak between samples
    Eigen::ArrayXd y(9);
    double const h = 0.05, shift = 0.37 * h;
    for (int j = 0; j < 9; ++j) {
        double const c = std::cos((j - 4) * h - shift);
        y(j) = c * c;
    }
    auto const r = detail::refine_extremum(y, 4);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.offset * h == doctest::Approx(shift).epsilon(1e-6));
}
