#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "polarslit/config.hpp"
#include "polarslit/montecarlo.hpp"
#include "polarslit/screenfield.hpp"

namespace polarslit {

enum class Command { simulate, sample, erase, sweep, norm };

std::optional<Command> parse_command(std::string_view name);

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;

struct RunOptions {
    std::filesystem::path out;
    bool ascii = false;
    unsigned threads = 0;
    std::ostream* console = nullptr;      // summaries and sparklines
    std::ostream* diagnostics = nullptr;  // warnings and errors
};

/// Runs one command; data goes to files under `options.out`, never to the console.
int run(Command command, ExperimentConfig const& config, RunOptions const& options);

// CSV writers: `# key = value` metadata block, header line, then rows.
void write_profile_csv(std::ostream& os, ExperimentConfig const& config, IntensityProfile<double> const& p);
void write_histogram_csv(std::ostream& os, ExperimentConfig const& config, Histogram const& h);

struct SweepRow {
    double theta2;
    double v_sector_visibility;
    double total_visibility;
    double transmission;
};

/// Visibilities and transmission over theta2 in [0, pi], `sweep_points` samples.
std::vector<SweepRow> sweep_theta2(ExperimentConfig const& config);

/// `dir/name.csv` + tag -> `dir/name.tag.csv`
std::filesystem::path sibling_path(std::filesystem::path const& out, std::string_view tag);

/// One line of `width` characters, levels scaled to the maximum of `values`.
std::string ascii_sparkline(Eigen::ArrayXd const& values, std::size_t width = 80);

/// Runs the property checks of every module, one PASS/FAIL line each.
bool run_verification(std::ostream& os);

}  // namespace polarslit
