#include "polarslit/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "polarslit/analysis.hpp"
#include "polarslit/eraser.hpp"

namespace polarslit {

std::optional<Command> parse_command(std::string_view name) {
    if (name == "simulate") return Command::simulate;
    if (name == "sample") return Command::sample;
    if (name == "erase") return Command::erase;
    if (name == "sweep") return Command::sweep;
    if (name == "norm") return Command::norm;
    return std::nullopt;
}

namespace {

void write_metadata(std::ostream& os, ExperimentConfig const& config) {
    std::istringstream lines(render_config(config));
    for (std::string line; std::getline(lines, line);) os << "# " << line << '\n';
}

std::ofstream open_output(std::filesystem::path const& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open output file '" + path.string() + "'");
    return f;
}

void finish(std::ofstream& f, std::filesystem::path const& path) {
    f.flush();
    if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void write_profile_file(std::filesystem::path const& path, ExperimentConfig const& config,
                        IntensityProfile<double> const& p) {
    auto f = open_output(path);
    write_profile_csv(f, config, p);
    finish(f, path);
}

std::ostream& console_of(RunOptions const& o) { return o.console ? *o.console : std::cout; }
std::ostream& diag_of(RunOptions const& o) { return o.diagnostics ? *o.diagnostics : std::cerr; }

double total_visibility_or_zero(IntensityProfile<double> const& p) {
    if (!(p.i_total.maxCoeff() > 0.0)) return 0.0;
    return profile_visibility(p).total;
}

int simulate(ExperimentConfig const& config, RunOptions const& o) {
    auto const p = profile(config.apparatus(), config.grid(), config.detector, config.screen_options());
    write_profile_file(o.out, config, p);
    if (o.ascii) console_of(o) << ascii_sparkline(p.i_total) << '\n';
    return kExitOk;
}

int sample(ExperimentConfig const& config, RunOptions const& o) {
    auto const app = config.apparatus();
    SamplerOptions so;
    so.threads = o.threads;
    so.screen = config.screen_options();
    auto const hist = sample_photons(app, config.window(), config.photons, config.seed, so);

    auto f = open_output(o.out);
    write_histogram_csv(f, config, hist);
    finish(f, o.out);

    auto& con = console_of(o);
    if (hist.n_transmitted > 0) {
        // reference grid with 32 steps per bin
        ScreenGrid const ref_grid{config.half_width, config.bins * 32 + 1};
        auto const ref = profile(app, ref_grid, Detector<double>::total(), config.screen_options());
        auto const chi = chi_square_against(ref, hist);
        con << "chi2 = " << format_number(chi.statistic) << " dof = " << chi.dof
            << " p_value = " << format_number(chi.p_value) << " n_transmitted = " << hist.n_transmitted
            << " n_emitted = " << hist.n_emitted << '\n';
    } else {
        con << "chi2 = n/a dof = 0 p_value = n/a n_transmitted = 0 n_emitted = " << hist.n_emitted << '\n';
    }
    if (o.ascii) {
        Eigen::ArrayXd const counts = (hist.counts_v + hist.counts_h).cast<double>();
        con << ascii_sparkline(counts) << '\n';
    }
    return kExitOk;
}

int erase(ExperimentConfig const& config, RunOptions const& o) {
    auto const setup = config.eraser();
    auto const grid = config.grid();
    auto const plus = coincidence_profile(setup, Outcome::plus, grid, config.delta);
    auto const minus = coincidence_profile(setup, Outcome::minus, grid, config.delta);
    auto const marginal = marginal_profile(setup, grid, config.delta);

    write_profile_file(o.out, config, config.p_outcome == Outcome::plus ? plus : minus);
    write_profile_file(sibling_path(o.out, "plus"), config, plus);
    write_profile_file(sibling_path(o.out, "minus"), config, minus);
    write_profile_file(sibling_path(o.out, "marginal"), config, marginal);
    if (o.ascii) {
        auto& con = console_of(o);
        con << ascii_sparkline(plus.i_total) << '\n'
            << ascii_sparkline(minus.i_total) << '\n'
            << ascii_sparkline(marginal.i_total) << '\n';
    }
    return kExitOk;
}

int sweep(ExperimentConfig const& config, RunOptions const& o) {
    auto const rows = sweep_theta2(config);
    auto f = open_output(o.out);
    write_metadata(f, config);
    f << "theta2,v_sector_visibility,total_visibility,transmission\n";
    for (auto const& r : rows) {
        f << format_number(r.theta2) << ',' << format_number(r.v_sector_visibility) << ','
          << format_number(r.total_visibility) << ',' << format_number(r.transmission) << '\n';
    }
    finish(f, o.out);
    if (o.ascii) {
        Eigen::ArrayXd v(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) v(static_cast<Eigen::Index>(i)) = rows[i].v_sector_visibility;
        console_of(o) << ascii_sparkline(v) << '\n';
    }
    return kExitOk;
}

int norm(ExperimentConfig const& config, RunOptions const& o) {
    double const t = transmission(sector_amplitudes(config.apparatus()));
    auto f = open_output(o.out);
    write_metadata(f, config);
    f << "transmission = " << format_number(t) << '\n';
    finish(f, o.out);
    return kExitOk;
}

}  // namespace

int run(Command command, ExperimentConfig const& config, RunOptions const& options) {
    auto& diag = diag_of(options);
    try {
        if (config.geometry().paraxial_warning()) {
            diag << "warning: d/D = " << format_number(config.geometry().paraxial_ratio())
                 << " exceeds " << format_number(kParaxialWarningRatio)
                 << "; paraxial path differences are inaccurate (use delta = exact)\n";
        }
        switch (command) {
            case Command::simulate: return simulate(config, options);
            case Command::sample: return sample(config, options);
            case Command::erase: return erase(config, options);
            case Command::sweep: return sweep(config, options);
            case Command::norm: return norm(config, options);
        }
    } catch (ConfigError const& e) {
        diag << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (std::exception const& e) {
        diag << "error: " << e.what() << '\n';
        return kExitRuntimeError;
    }
    return kExitRuntimeError;
}

void write_profile_csv(std::ostream& os, ExperimentConfig const& config, IntensityProfile<double> const& p) {
    write_metadata(os, config);
    os << "x_m,i_total,i_v,i_h\n";
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        os << format_number(p.xs(j)) << ',' << format_number(p.i_total(j)) << ',' << format_number(p.i_v(j))
           << ',' << format_number(p.i_h(j)) << '\n';
    }
}

void write_histogram_csv(std::ostream& os, ExperimentConfig const& config, Histogram const& h) {
    write_metadata(os, config);
    os << "x_lo_m,x_hi_m,count_v,count_h\n";
    for (Eigen::Index b = 0; b < h.counts_v.size(); ++b) {
        os << format_number(h.edges(b)) << ',' << format_number(h.edges(b + 1)) << ',' << h.counts_v(b) << ','
           << h.counts_h(b) << '\n';
    }
}

std::vector<SweepRow> sweep_theta2(ExperimentConfig const& config) {
    if (config.sweep_points < 2) throw std::domain_error("sweep needs at least 2 points");
    std::vector<SweepRow> rows;
    rows.reserve(config.sweep_points);
    ApparatusConfig<double> app = config.apparatus();
    for (std::size_t i = 0; i < config.sweep_points; ++i) {
        double const theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(config.sweep_points - 1);
        app.polarizer2 = PolarizerAxis<double>(theta);
        auto const amps = sector_amplitudes(app);
        auto const p = profile(app, config.grid(), Detector<double>::total(), config.screen_options());
        rows.push_back({theta, sector_visibility(amps.a1V(), amps.a2V()), total_visibility_or_zero(p),
                        transmission(amps)});
    }
    return rows;
}

std::filesystem::path sibling_path(std::filesystem::path const& out, std::string_view tag) {
    std::filesystem::path name = out.stem();
    name += ".";
    name += std::string(tag);
    name += out.extension();
    return out.parent_path() / name;
}

std::string ascii_sparkline(Eigen::ArrayXd const& values, std::size_t width) {
    static constexpr std::string_view kLevels = " .:-=+*#%@";
    std::string line(width, ' ');
    auto const n = static_cast<std::size_t>(values.size());
    if (n == 0 || width == 0) return line;
    double const top = values.maxCoeff();
    if (!(top > 0.0)) return line;
    for (std::size_t c = 0; c < width; ++c) {
        std::size_t const lo = c * n / width;
        std::size_t const hi = std::max(lo + 1, (c + 1) * n / width);
        double const v = values.segment(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(std::min(hi, n) - lo)).maxCoeff();
        auto const level = static_cast<std::size_t>(std::clamp(v / top, 0.0, 1.0) * static_cast<double>(kLevels.size() - 1) + 0.5);
        line[c] = kLevels[level];
    }
    return line;
}

}  // namespace polarslit
