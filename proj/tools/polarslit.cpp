// polarslit <command> --config <file> --out <file> [--seed N] [--ascii] [--verify]

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "polarslit/commands.hpp"
#include "polarslit/config.hpp"

int main(int argc, char** argv) {
    using namespace polarslit;

    CLI::App app{"Double slit with per-slit polarizers and an entangled-pair eraser"};
    std::string command_name;
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool ascii = false;
    bool verify = false;
    unsigned threads = 0;

    app.add_option("command", command_name, "simulate | sample | erase | sweep | norm")
        ->check(CLI::IsMember({"simulate", "sample", "erase", "sweep", "norm"}));
    app.add_option("--config", config_path, "experiment config file (key = value lines)");
    app.add_option("--out", out_path, "output file");
    auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
    app.add_flag("--ascii", ascii, "print an 80-column sparkline of the result");
    app.add_flag("--verify", verify, "run the built-in property checks");
    app.add_option("--threads", threads, "sampling threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const& e) {
        return app.exit(e);
    } catch (CLI::ParseError const& e) {
        app.exit(e, std::cerr, std::cerr);
        return kExitConfigError;
    }

    bool verified = true;
    if (verify) verified = run_verification(std::cout);
    if (command_name.empty()) {
        if (!verify) {
            std::cerr << "error: a command is required (simulate | sample | erase | sweep | norm)\n";
            return kExitConfigError;
        }
        return verified ? kExitOk : kExitRuntimeError;
    }
    if (config_path.empty() || out_path.empty()) {
        std::cerr << "error: --config and --out are required\n";
        return kExitConfigError;
    }

    ExperimentConfig config;
    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            std::cerr << "config error: cannot read '" << config_path << "'\n";
            return kExitConfigError;
        }
        std::ostringstream text;
        text << in.rdbuf();
        config = parse_config(text.str());
    } catch (ConfigError const& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (std::exception const& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
    if (*seed_opt) config.seed = seed;

    RunOptions options;
    options.out = out_path;
    options.ascii = ascii;
    options.threads = threads;
    int const code = run(*parse_command(command_name), config, options);
    if (code == kExitOk && !verified) return kExitRuntimeError;
    return code;
}
