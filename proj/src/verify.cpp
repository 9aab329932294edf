#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <random>

#include "polarslit/analysis.hpp"
#include "polarslit/commands.hpp"
#include "polarslit/eraser.hpp"

namespace polarslit {

namespace {

using C = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-12;

class Checker {
public:
    explicit Checker(std::ostream& os) : os_(os) {}

    void operator()(char const* module, char const* property, bool ok) {
        os_ << (ok ? "PASS " : "FAIL ") << module << ": " << property << '\n';
        all_ok_ = all_ok_ && ok;
    }

    bool ok() const { return all_ok_; }

private:
    std::ostream& os_;
    bool all_ok_ = true;
};

struct Random {
    std::mt19937_64 gen{20240917};
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
    C complex() { return {uniform(-1, 1), uniform(-1, 1)}; }
    PolarizationState<double> state() { return make_input_state(complex(), complex()); }
};

double max_rel_diff(Eigen::ArrayXd const& a, Eigen::ArrayXd const& b) {
    double const scale = std::max(a.abs().maxCoeff(), b.abs().maxCoeff());
    return scale > 0 ? (a - b).abs().maxCoeff() / scale : 0.0;
}

ApparatusConfig<double> two_polarizers(C a, C b, double theta) {
    ApparatusConfig<double> c;
    c.input = make_input_state(a, b);
    c.polarizer1 = PolarizerAxis<double>(0.0);
    c.polarizer2 = PolarizerAxis<double>(theta);
    return c;
}

void verify_polarization(Checker& check, Random& rng) {
    bool ortho = true, idem = true, complete = true, phase = true, round_trip = true;
    for (int i = 0; i < 200; ++i) {
        double const theta = rng.uniform(-10, 10);
        auto const [e1, e2] = rotated_basis(theta);
        ortho = ortho && std::abs(inner(e1, e2)) <= kTol && std::abs(e1.norm2() - 1) <= kTol &&
                std::abs(e2.norm2() - 1) <= kTol;

        auto const s = rng.state();
        PolarizerAxis<double> const axis(theta);
        auto const once = project_polarizer(s, axis).state;
        auto const twice = project_polarizer(once, axis).state;
        idem = idem && (once.jones - twice.jones).cwiseAbs().maxCoeff() <= kTol;

        auto const [c1, c2] = express_in_basis(s, theta);
        complete = complete && std::abs(std::norm(c1) + std::norm(c2) - 1) <= kTol;
        round_trip = round_trip && (reconstruct(c1, c2, theta).jones - s.jones).cwiseAbs().maxCoeff() <= kTol;

        PolarizationState<double> shifted = s;
        shifted.jones *= std::polar(1.0, rng.uniform(0, 2 * kPi));
        phase = phase && std::abs(project_polarizer(s, axis).fraction - project_polarizer(shifted, axis).fraction) <= kTol;
    }
    check("polarization", "rotated basis is orthonormal", ortho);
    check("polarization", "projection is idempotent", idem);
    check("polarization", "basis components are complete", complete);
    check("polarization", "transmission ignores global phase", phase);
    check("polarization", "basis round-trip", round_trip);
}

void verify_apparatus(Checker& check, Random& rng) {
    bool odd = true, order = true, converge = true;
    for (int i = 0; i < 200; ++i) {
        auto const g = SlitGeometry<double>::make(rng.uniform(1e-5, 1e-3), rng.uniform(0.1, 5), rng.uniform(3e-7, 1e-6));
        double const x = rng.uniform(-0.1, 0.1);
        double const ex = path_difference(g, x, DeltaMode::exact);
        odd = odd && path_difference(g, -x, DeltaMode::paraxial) == -path_difference(g, x, DeltaMode::paraxial) &&
              std::abs(path_difference(g, -x, DeltaMode::exact) + ex) <= kTol * std::abs(ex);
        auto const l = path_lengths(g, x);
        order = order && (x > 0 ? l.slit2 > l.slit1 : l.slit2 < l.slit1);

        auto const fine = SlitGeometry<double>::make(1e-4 * g.screen_distance * rng.uniform(0.1, 1), g.screen_distance, g.wavelength);
        double const xf = rng.uniform(-1, 1) * fine.screen_distance / 100;
        double const e = path_difference(fine, xf, DeltaMode::exact);
        double const p = path_difference(fine, xf, DeltaMode::paraxial);
        converge = converge && std::abs(e - p) <= 1e-4 * std::abs(e);
    }
    check("apparatus", "path difference is odd in x", odd);
    check("apparatus", "path length ordering", order);
    check("apparatus", "paraxial convergence", converge);
}

void verify_screenfield(Checker& check, Random& rng) {
    bool additive = true, bounded = true, energy = true, mirror = true, detector = true;
    SlitGeometry<double> const g;
    ScreenGrid const grid{4 * g.fringe_spacing(), 801};  // eight whole fringes
    for (int i = 0; i < 50; ++i) {
        auto const c = two_polarizers(rng.complex(), rng.complex(), rng.uniform(0, kPi));
        auto const amps = sector_amplitudes(c);
        auto const p = profile(c, grid);
        additive = additive && max_rel_diff(p.i_total, p.i_v + p.i_h) <= kTol;
        double const bound = std::pow(amps.amps.cwiseAbs().sum(), 2);
        bounded = bounded && p.i_total.maxCoeff() <= bound + kTol;
        double const mean_v = p.i_v.head(p.size() - 1).mean();
        double const mean_h = p.i_h.head(p.size() - 1).mean();
        energy = energy && std::abs(mean_v - std::norm(amps.a1V()) - std::norm(amps.a2V())) <= 1e-9 &&
                 std::abs(mean_h - std::norm(amps.a1H()) - std::norm(amps.a2H())) <= 1e-9;

        auto real_cfg = two_polarizers(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0, kPi));
        auto const pr = profile(real_cfg, grid);
        mirror = mirror && max_rel_diff(pr.i_total, pr.i_total.reverse()) <= kTol;

        double const phi = rng.uniform(0, kPi);
        auto const along = profile(c, grid, Detector<double>::along(phi));
        auto const across = profile(c, grid, Detector<double>::along(phi + kPi / 2));
        detector = detector && max_rel_diff(along.i_total + across.i_total, p.i_total) <= kTol &&
                   max_rel_diff(profile(c, grid, Detector<double>::along(0.0)).i_total,
                                profile(c, grid, Detector<double>::vertical()).i_total) <= kTol;
    }
    ApparatusConfig<double> textbook;
    auto const t = profile(textbook, grid);
    Eigen::ArrayXd expected(t.size());
    for (Eigen::Index j = 0; j < t.size(); ++j) {
        double const c = std::cos(kPi * path_difference(g, t.xs(j), DeltaMode::paraxial) / g.wavelength);
        expected(j) = 2.0 * c * c;
    }
    bool cos2_limit = ((t.i_total - expected).abs() <= kTol * expected.abs().max(1e-300)).all();

    auto const ww = profile(two_polarizers(1.0, 0.0, kPi / 2), grid);
    bool const flat = ww.i_total.maxCoeff() - ww.i_total.minCoeff() <= kTol * ww.i_total.maxCoeff();

    check("screenfield", "sector additivity", additive);
    check("screenfield", "no amplification", bounded);
    check("screenfield", "sector energy bookkeeping", energy);
    check("screenfield", "cos^2 limit for equal amplitudes", cos2_limit);
    check("screenfield", "which-way flatness", flat);
    check("screenfield", "detector basis consistency", detector);
    check("screenfield", "mirror symmetry for real amplitudes", mirror);
}

void verify_analysis(Checker& check, Random& rng) {
    bool agree = true, scale = true, bounds = true;
    ScreenGrid const grid{0.02, 2001};
    for (int i = 0; i < 50; ++i) {
        auto const c = two_polarizers(rng.complex(), rng.complex(), rng.uniform(0, kPi));
        auto const amps = sector_amplitudes(c);
        auto const rep = profile_visibility(profile(c, grid));
        bool const no = !which_way_condition(c).interference;
        agree = agree && (no == (rep.v_sector <= kFringelessVisibility));
        bounds = bounds && rep.total >= 0 && rep.total <= 1 + kTol &&
                 std::abs(rep.v_sector - sector_visibility(amps.a1V(), amps.a2V())) <= 1e-6;
        C const k = rng.complex();
        scale = scale && std::abs(sector_visibility(amps.a1V() * k, amps.a2V() * k) -
                                  sector_visibility(amps.a1V(), amps.a2V())) <= kTol;
    }
    for (auto const& [a, b, theta] : {std::tuple{C(0), C(1), 0.3}, {C(1), C(0), kPi / 2}, {C(1), C(-1), kPi / 4}}) {
        auto const c = two_polarizers(a, b, theta);
        agree = agree && !which_way_condition(c).interference &&
                profile_visibility(profile(c, grid, Detector<double>::vertical())).v_sector <= kFringelessVisibility;
    }
    ApparatusConfig<double> textbook;
    ScreenGrid const fine{0.02, 8001};
    auto const spacing = profile_visibility(profile(textbook, fine)).fringe_spacing;
    bool const fringes = spacing && std::abs(*spacing / textbook.geometry.fringe_spacing() - 1) <= 1e-4;

    check("analysis", "which-way condition agrees with V visibility", agree);
    check("analysis", "sector visibility is scale invariant", scale);
    check("analysis", "visibility bounds and analytic match", bounds);
    check("analysis", "fringe spacing matches lambda D / d", fringes);
}

void verify_montecarlo(Checker& check, Random& rng) {
    auto const c = two_polarizers(rng.complex(), rng.complex(), rng.uniform(0, kPi));
    ScreenWindow const w{0.02, 50};
    SamplerOptions one, four;
    one.threads = 1;
    four.threads = 4;
    auto const h1 = sample_photons(c, w, 200000, 7, one);
    auto const h4 = sample_photons(c, w, 200000, 7, four);
    check("montecarlo", "histograms independent of thread count", h1 == h4);

    double const t = transmission(sector_amplitudes(c));
    double const sigma = std::sqrt(200000.0 * t * (1 - t));
    check("montecarlo", "transmission within 5 sigma",
          std::abs(static_cast<double>(h1.n_transmitted) - 200000.0 * t) <= 5 * sigma + 1e-9);
    check("montecarlo", "counts sum to n_transmitted",
          h1.counts_v.sum() + h1.counts_h.sum() == h1.n_transmitted && h1.n_transmitted <= h1.n_emitted);
}

void verify_eraser(Checker& check, Random& rng) {
    ScreenGrid const grid{0.01, 401};
    bool no_signal = true, complement = true, norm = true;
    for (int i = 0; i < 20; ++i) {
        double const phi = rng.uniform(0, kPi);
        norm = norm && std::abs(eraser_joint_state(phi).norm2() - 1) <= kTol;
        for (auto s : {SAnalyzer::L, SAnalyzer::R, SAnalyzer::none}) {
            EraserSetup<double> const a{{}, PolarizerAxis<double>(phi), s};
            EraserSetup<double> const b{{}, PolarizerAxis<double>(0.0), s};
            auto const ma = marginal_profile(a, grid);
            no_signal = no_signal && (ma.i_total - marginal_profile(b, grid).i_total).abs().maxCoeff() <= kTol;
            auto const plus = coincidence_profile(a, Outcome::plus, grid);
            auto const minus = coincidence_profile(a, Outcome::minus, grid);
            complement = complement && (plus.i_total + minus.i_total - ma.i_total).abs().maxCoeff() <= kTol;
        }
    }
    auto const j = eraser_joint_state(0.0);
    // plus = V, minus = H at basis angle 0
    bool const table = std::abs(j(Slit::two, Circular::L, Outcome::plus)) > 0 && j(Slit::one, Circular::L, Outcome::plus) == 0.0 &&
                       std::abs(j(Slit::one, Circular::L, Outcome::minus)) > 0 && j(Slit::two, Circular::L, Outcome::minus) == 0.0 &&
                       std::abs(j(Slit::one, Circular::R, Outcome::plus)) > 0 && j(Slit::two, Circular::R, Outcome::plus) == 0.0 &&
                       std::abs(j(Slit::two, Circular::R, Outcome::minus)) > 0 && j(Slit::one, Circular::R, Outcome::minus) == 0.0;
    check("eraser", "marginal independent of p basis", no_signal);
    check("eraser", "outcome profiles sum to the marginal", complement);
    check("eraser", "which-path table VL->2 HL->1 VR->1 HR->2", table);
    check("eraser", "joint state normalized", norm);
}

void verify_cli(Checker& check, Random& rng) {
    bool ok = true;
    for (int i = 0; i < 50; ++i) {
        ExperimentConfig c;
        c.a = rng.complex();
        c.b = rng.complex();
        c.theta2 = PolarizerAxis<double>(rng.uniform(-5, 5));
        c.detector = Detector<double>::along(rng.uniform(0, 3));
        c.seed = rng.gen();
        ok = ok && parse_config(render_config(c)) == c;
    }
    check("cli", "config render/parse round-trip", ok);
}

}  // namespace

bool run_verification(std::ostream& os) {
    Checker check(os);
    Random rng;
    verify_polarization(check, rng);
    verify_apparatus(check, rng);
    verify_screenfield(check, rng);
    verify_analysis(check, rng);
    verify_montecarlo(check, rng);
    verify_eraser(check, rng);
    verify_cli(check, rng);
    return check.ok();
}

}  // namespace polarslit
