// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "polarslit/analysis.hpp"
#include "polarslit/commands.hpp"
#include "polarslit/config.hpp"
#include "polarslit/eraser.hpp"
#include "polarslit/montecarlo.hpp"

using namespace polarslit;
using C = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool ok = true;
    std::string detail;

    void require(bool cond, std::string const& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

ApparatusConfig<double> two_polarizers(C a, C b, double theta) {
    ApparatusConfig<double> c;
    c.input = make_input_state(a, b);
    c.polarizer1 = PolarizerAxis<double>(0.0);
    c.polarizer2 = PolarizerAxis<double>(theta);
    return c;
}

std::string num(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

ScreenGrid const kGrid{0.02, 2001};

Verdict amplitudes_match_direct_evaluation() {
    Verdict r;
    std::mt19937_64 gen(1001);
    std::uniform_real_distribution<double> u(-1, 1);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        C const a(u(gen), u(gen)), b(u(gen), u(gen));
        double const theta = kPi * u(gen);
        double const lambda = std::sqrt(std::norm(a) + std::norm(b));
        C const proj = a * std::cos(theta) + b * std::sin(theta);
        C const n = std::sqrt(2.0) * lambda;
        auto const s = sector_amplitudes(two_polarizers(a, b, theta));
        worst = std::max({worst, std::abs(s.a1V() - a / n), std::abs(s.a1H()),
                          std::abs(s.a2V() - std::cos(theta) * proj / n),
                          std::abs(s.a2H() - std::sin(theta) * proj / n)});
    }
    r.require(worst <= 1e-12, "max deviation " + num(worst));
    r.detail = r.ok ? "max deviation " + num(worst) : r.detail;
    return r;
}

Verdict parallel_polarizers_give_cos_squared() {
    Verdict r;
    auto const c = two_polarizers(1, 0, 0.0);
    auto const p = profile(c, kGrid);
    double const A2 = 0.5;
    double worst = 0;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        double const cs = std::cos(kPi * path_difference(c.geometry, p.xs(j), DeltaMode::paraxial) / c.geometry.wavelength);
        double const expected = 4 * A2 * cs * cs;
        double const rel = expected > 0 ? std::abs(p.i_total(j) - expected) / expected : std::abs(p.i_total(j));
        worst = std::max(worst, rel);
    }
    r.require(p.size() == 2001, "wrong grid size");
    r.require(worst <= 1e-12, "max relative error " + num(worst));
    if (r.ok) r.detail = "max relative error " + num(worst);
    return r;
}

Verdict which_way_trichotomy() {
    Verdict r;
    double const k = 1 / std::sqrt(2.0);
    struct Case {
        ApparatusConfig<double> config;
        WhichWayReason reason;
    };
    for (auto const& cs : {Case{two_polarizers(0, 1, 0.6), WhichWayReason::a_zero},
                           Case{two_polarizers(0.8, 0.6, kPi / 2), WhichWayReason::cos_theta_zero},
                           Case{two_polarizers(k, -k, kPi / 4), WhichWayReason::projection_zero}}) {
        auto const ww = which_way_condition(cs.config);
        auto const rep = profile_visibility(profile(cs.config, kGrid));
        r.require(!ww.interference && ww.reason == cs.reason, "wrong reason " + std::string(to_string(ww.reason)));
        r.require(rep.v_sector <= 1e-9, "vanishing case visibility " + num(rep.v_sector));
    }
    std::mt19937_64 gen(1003);
    std::uniform_real_distribution<double> u(-1, 1);
    double worst = 0;
    int checked = 0;
    while (checked < 1000) {
        C const a(u(gen), u(gen)), b(u(gen), u(gen));
        double const theta = kPi * u(gen);
        auto const c = two_polarizers(a, b, theta);
        if (!which_way_condition(c).interference) continue;
        auto const s = sector_amplitudes(c);
        double const m1 = std::abs(s.a1V()), m2 = std::abs(s.a2V());
        if (m1 < 1e-6 || m2 < 1e-6) continue;  // too close to a vanishing condition to call non-degenerate
        double const expected = 2 * m1 * m2 / (m1 * m1 + m2 * m2);
        double const got = profile_visibility(profile(c, kGrid)).v_sector;
        r.require(got > 0, "zero visibility for a non-degenerate triple");
        worst = std::max(worst, std::abs(got - expected));
        ++checked;
    }
    r.require(worst <= 1e-6, "max visibility deviation " + num(worst));
    if (r.ok) r.detail = "max visibility deviation " + num(worst);
    return r;
}

Verdict single_polarizer_sectors() {
    Verdict r;
    std::mt19937_64 gen(1004);
    std::uniform_real_distribution<double> u(-1, 1);
    double worst_v = 0, worst_h = 0;
    for (int i = 0; i < 100; ++i) {
        C const a(u(gen), u(gen)), b(u(gen), u(gen));
        ApparatusConfig<double> c;
        c.input = make_input_state(a, b);
        c.polarizer1 = PolarizerAxis<double>(0.0);
        worst_v = std::max(worst_v, std::abs(profile_visibility(profile(c, kGrid, Detector<double>::vertical())).total - 1));
        worst_h = std::max(worst_h, profile_visibility(profile(c, kGrid, Detector<double>::horizontal())).total);
    }
    r.require(worst_v <= 1e-9, "V detector |visibility - 1| " + num(worst_v));
    r.require(worst_h <= 1e-9, "H detector visibility " + num(worst_h));
    if (r.ok) r.detail = "|V - 1| " + num(worst_v) + ", H " + num(worst_h);
    return r;
}

Verdict transmission_accounting() {
    Verdict r;
    std::mt19937_64 gen(1005);
    std::uniform_real_distribution<double> u(-1, 1);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        C const a(u(gen), u(gen)), b(u(gen), u(gen));
        double const theta = kPi * u(gen);
        double const l2 = std::norm(a) + std::norm(b);
        double const expected = (std::norm(a) + std::norm(a * std::cos(theta) + b * std::sin(theta))) / (2 * l2);
        worst = std::max(worst, std::abs(transmission(sector_amplitudes(two_polarizers(a, b, theta))) - expected));
    }
    r.require(worst <= 1e-12, "max transmission deviation " + num(worst));

    auto const c = two_polarizers(C(0.6, 0.2), C(-0.5, 0.4), 1.9);
    std::int64_t const n = 1000000;
    ScreenWindow const w{0.02, 100};
    auto const h = sample_photons(c, w, n, 4242);
    double const t = transmission(sector_amplitudes(c));
    double const z = (static_cast<double>(h.n_transmitted) - n * t) / std::sqrt(n * t * (1 - t));
    r.require(std::abs(z) <= 5, "Monte Carlo z-score " + num(z));
    r.require(h == sample_photons(c, w, n, 4242), "repeated run differs");
    if (r.ok) r.detail = "max deviation " + num(worst) + ", MC z = " + num(z);
    return r;
}

Verdict fringe_geometry() {
    Verdict r;
    SlitGeometry<double> const g;
    double const spacing = g.fringe_spacing();
    double worst_spacing = 0;
    for (double per_fringe : {64.0, 100.0, 250.0}) {
        double const hw = 4.3 * spacing;
        auto const n = static_cast<std::size_t>(2 * hw / spacing * per_fringe) + 1;
        ApparatusConfig<double> c;
        auto const rep = profile_visibility(profile(c, ScreenGrid{hw, n}));
        if (!rep.fringe_spacing) {
            r.require(false, "no spacing reported");
            continue;
        }
        worst_spacing = std::max(worst_spacing, std::abs(*rep.fringe_spacing / spacing - 1));
    }
    r.require(worst_spacing <= 1e-4, "spacing relative error " + num(worst_spacing));

    std::mt19937_64 gen(1006);
    std::uniform_real_distribution<double> u(0, 1);
    double worst_delta = 0;
    for (int i = 0; i < 10000; ++i) {
        double const D = 0.1 + 10 * u(gen);
        auto const geo = SlitGeometry<double>::make(1e-4 * D * (1e-3 + u(gen)), D, 5e-7);
        double const x = (2 * u(gen) - 1) * D / 100;
        if (x == 0.0) continue;
        double const ex = path_difference(geo, x, DeltaMode::exact);
        worst_delta = std::max(worst_delta, std::abs(ex - path_difference(geo, x, DeltaMode::paraxial)) / std::abs(ex));
    }
    r.require(worst_delta <= 1e-4, "exact vs paraxial " + num(worst_delta));
    if (r.ok) r.detail = "spacing error " + num(worst_spacing) + ", delta error " + num(worst_delta);
    return r;
}

Verdict monte_carlo_fidelity() {
    Verdict r;
    auto const c = two_polarizers(C(0.9, 0.1), C(0.3, -0.4), 0.8);
    ScreenWindow const w{0.02, 100};
    auto const ref = profile(c, ScreenGrid{w.half_width, w.bins * 32 + 1});
    int passing = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto const h = sample_photons(c, w, 1000000, seed);
        if (chi_square_against(ref, h).p_value > 1e-3) ++passing;
    }
    r.require(passing >= 99, std::to_string(passing) + "/100 seeds with p > 1e-3");

    SamplerOptions one, four;
    one.threads = 1;
    four.threads = 4;
    auto const h1 = sample_photons(c, w, 1000000, 77, one);
    auto const h4 = sample_photons(c, w, 1000000, 77, four);
    auto const again = sample_photons(c, w, 1000000, 77, one);
    ExperimentConfig cfg;
    std::ostringstream s1, s4, s1b;
    write_histogram_csv(s1, cfg, h1);
    write_histogram_csv(s4, cfg, h4);
    write_histogram_csv(s1b, cfg, again);
    r.require(s1.str() == s4.str(), "histogram bytes differ across thread counts");
    r.require(s1.str() == s1b.str(), "histogram bytes differ across repeated runs");
    if (r.ok) r.detail = std::to_string(passing) + "/100 seeds with p > 1e-3, byte-identical across runs and threads";
    return r;
}

Verdict eraser_suite() {
    Verdict r;
    ScreenGrid const grid{0.02, 2001};
    SlitGeometry<double> const g;

    // (i) which-path basis
    auto const j = eraser_joint_state(0.0);
    struct Cell {
        Circular c;
        Outcome o;
        Slit slit;
    };
    for (auto const& cell : {Cell{Circular::L, Outcome::plus, Slit::two}, Cell{Circular::L, Outcome::minus, Slit::one},
                             Cell{Circular::R, Outcome::plus, Slit::one}, Cell{Circular::R, Outcome::minus, Slit::two}}) {
        Slit const other = cell.slit == Slit::one ? Slit::two : Slit::one;
        r.require(std::norm(j(cell.slit, cell.c, cell.o)) > 0.2 && std::abs(j(other, cell.c, cell.o)) <= 1e-12,
                  "which-path table mismatch");
    }
    double worst_i = 0;
    for (auto s : {SAnalyzer::L, SAnalyzer::R, SAnalyzer::none})
        for (Outcome o : {Outcome::plus, Outcome::minus})
            worst_i = std::max(worst_i, profile_visibility(coincidence_profile(EraserSetup<double>{g, PolarizerAxis<double>(0.0), s}, o, grid)).total);
    r.require(worst_i <= 1e-9, "basis 0 visibility " + num(worst_i));

    // (ii) erasing basis
    double worst_vis = 0, worst_sum = 0;
    for (auto s : {SAnalyzer::L, SAnalyzer::R}) {
        EraserSetup<double> const setup{g, PolarizerAxis<double>(kPi / 4), s};
        auto const plus = coincidence_profile(setup, Outcome::plus, grid);
        auto const minus = coincidence_profile(setup, Outcome::minus, grid);
        auto const marginal = marginal_profile(setup, grid);
        worst_vis = std::max({worst_vis, std::abs(profile_visibility(plus).total - 1),
                              std::abs(profile_visibility(minus).total - 1)});
        worst_sum = std::max(worst_sum, (plus.i_total + minus.i_total - marginal.i_total).abs().maxCoeff());
    }
    r.require(worst_vis <= 1e-9, "basis pi/4 |visibility - 1| " + num(worst_vis));
    r.require(worst_sum <= 1e-12, "fringe sum vs marginal " + num(worst_sum));

    // (iii) no-signaling
    std::mt19937_64 gen(1008);
    std::uniform_real_distribution<double> u(0, kPi);
    double worst_marginal = 0;
    for (auto s : {SAnalyzer::L, SAnalyzer::R, SAnalyzer::none}) {
        auto const ref = marginal_profile(EraserSetup<double>{g, PolarizerAxis<double>(0.0), s}, grid);
        for (int i = 0; i < 100; ++i) {
            auto const m = marginal_profile(EraserSetup<double>{g, PolarizerAxis<double>(u(gen)), s}, grid);
            worst_marginal = std::max(worst_marginal, (m.i_total - ref.i_total).abs().maxCoeff());
        }
    }
    r.require(worst_marginal <= 1e-12, "marginal basis dependence " + num(worst_marginal));
    if (r.ok)
        r.detail = "basis 0 vis " + num(worst_i) + ", basis pi/4 |vis - 1| " + num(worst_vis) + ", sum " +
                   num(worst_sum) + ", marginal " + num(worst_marginal);
    return r;
}

ExperimentConfig random_config(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(-1, 1), pos(0.1, 10);
    std::uniform_int_distribution<int> pick(0, 3);
    ExperimentConfig c;
    do {
        c.a = {u(gen), pick(gen) == 0 ? 0.0 : u(gen)};
        c.b = {u(gen), u(gen)};
    } while (c.a == 0.0 && c.b == 0.0);
    c.d = 1e-4 * pos(gen);
    c.screen_distance = pos(gen);
    c.wavelength = 1e-7 * pos(gen);
    if (pick(gen) != 0) c.theta1 = PolarizerAxis<double>(5 * u(gen));
    if (pick(gen) != 0) c.theta2 = PolarizerAxis<double>(5 * u(gen));
    c.half_width = 0.01 * pos(gen);
    c.points = 2 + static_cast<std::size_t>(1000 * pos(gen));
    c.delta = pick(gen) % 2 ? DeltaMode::exact : DeltaMode::paraxial;
    c.intensity = pick(gen) % 2 ? IntensityMode::averaged : IntensityMode::instantaneous;
    switch (pick(gen)) {
        case 0: c.detector = Detector<double>::total(); break;
        case 1: c.detector = Detector<double>::vertical(); break;
        case 2: c.detector = Detector<double>::horizontal(); break;
        default: c.detector = Detector<double>::along(3 * u(gen)); break;
    }
    c.photons = 1 + static_cast<std::int64_t>(1e6 * pos(gen));
    c.seed = gen();
    c.bins = 1 + static_cast<std::size_t>(50 * pos(gen));
    c.p_basis = PolarizerAxis<double>(4 * u(gen));
    c.p_outcome = pick(gen) % 2 ? Outcome::plus : Outcome::minus;
    c.s_analyzer = std::array{SAnalyzer::L, SAnalyzer::R, SAnalyzer::none}[static_cast<std::size_t>(pick(gen) % 3)];
    c.sweep_points = 2 + static_cast<std::size_t>(100 * pos(gen));
    return c;
}

Verdict cli_round_trip_and_sweep() {
    Verdict r;
    std::mt19937_64 gen(1009);
    int mismatches = 0;
    for (int i = 0; i < 100; ++i) {
        auto const c = random_config(gen);
        if (!(parse_config(render_config(c)) == c)) ++mismatches;
    }
    r.require(mismatches == 0, std::to_string(mismatches) + " round-trip mismatches");

    auto const cfg = parse_config("a_re = 1\nb_re = 0\ntheta1 = 0\npoints = 2001\nsweep_points = 181");
    auto const rows = sweep_theta2(cfg);
    double const resolution = kPi / static_cast<double>(cfg.sweep_points - 1);
    std::vector<double> zeros;
    for (auto const& row : rows)
        if (row.v_sector_visibility <= 1e-9) zeros.push_back(row.theta2);
    r.require(zeros.size() == 1, std::to_string(zeros.size()) + " visibility zeros");
    if (zeros.size() == 1) r.require(std::abs(zeros[0] - kPi / 2) <= resolution, "zero at " + num(zeros[0]));
    if (r.ok) r.detail = "100 configs round-trip, single zero at theta2 = " + num(zeros[0]);
    return r;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        std::string name;
        double budget_s;
        std::function<Verdict()> check;
    };
    std::vector<Criterion> const criteria{
        {1, "sector amplitudes match direct evaluation", 1, amplitudes_match_direct_evaluation},
        {2, "parallel vertical polarizers give 4A^2 cos^2", 1, parallel_polarizers_give_cos_squared},
        {3, "which-way trichotomy", 5, which_way_trichotomy},
        {4, "single polarizer sectors", 5, single_polarizer_sectors},
        {5, "transmission accounting", 30, transmission_accounting},
        {6, "fringe geometry", 1, fringe_geometry},
        {7, "Monte Carlo fidelity", 120, monte_carlo_fidelity},
        {8, "eraser suite", 10, eraser_suite},
        {9, "CLI round-trip and sweep zero", 10, cli_round_trip_and_sweep},
    };

    int failures = 0;
    for (auto const& c : criteria) {
        auto const start = std::chrono::steady_clock::now();
        Verdict out;
        try {
            out = c.check();
        } catch (std::exception const& e) {
            out.ok = false;
            out.detail = std::string("exception: ") + e.what();
        }
        double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (out.ok && secs > c.budget_s) {
            out.ok = false;
            out.detail += " (over time budget)";
        }
        if (!out.ok) ++failures;
        std::cout << (out.ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " [" << num(secs)
                  << " s / " << c.budget_s << " s] " << out.detail << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
