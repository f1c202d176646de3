// Command-line front end: classify, equilibria, simulate, ctmc, sweep.
//
// Exit codes: 0 success, 1 validation or parse error, 2 numerical guard.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "mfgc/mfgc.hpp"

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mfgc::ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Stationary mean-field game of corruption: equilibria, stability and simulation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string format;
    std::string out_path;
    long long seed = -1;
    app.add_option("--config", config_path, "run configuration (key = value)")->required()->check(CLI::ExistingFile);
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "structured"}));
    app.add_option("--out", out_path, "output file (default: standard output)");
    app.add_option("--seed", seed, "random seed, overrides the configuration")->check(CLI::NonNegativeNumber);

    const auto* classify = app.add_subcommand("classify", "threshold x_bar and regime prediction");
    const auto* equilibria = app.add_subcommand("equilibria", "all stationary equilibria with stability");
    const auto* simulate = app.add_subcommand("simulate", "mean-field ODE trajectory");
    const auto* ctmc = app.add_subcommand("ctmc", "finite-N exact-event simulation");
    const auto* sweep = app.add_subcommand("sweep", "equilibria over a one-parameter grid");

    CLI11_PARSE(app, argc, argv);

    try {
        mfgc::RunConfig cfg = mfgc::parse_config(read_file(config_path));
        if (!format.empty()) cfg.format = mfgc::parse_format(format);
        if (!out_path.empty()) cfg.out = out_path;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

        std::ostringstream buffer;
        if (classify->parsed()) {
            mfgc::cmd_classify(cfg, buffer);
        } else if (equilibria->parsed()) {
            mfgc::cmd_equilibria(cfg, buffer, &std::cerr);
        } else if (simulate->parsed()) {
            mfgc::cmd_simulate(cfg, buffer);
        } else if (ctmc->parsed()) {
            mfgc::cmd_ctmc(cfg, buffer);
        } else if (sweep->parsed()) {
            mfgc::cmd_sweep(cfg, buffer);
        }

        if (cfg.out.empty()) {
            std::cout << buffer.str();
        } else {
            std::ofstream out(cfg.out, std::ios::binary);
            if (!out) throw mfgc::ConfigError("cannot open output file " + cfg.out);
            out << buffer.str();
        }
    } catch (const mfgc::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const mfgc::NumericalGuardError& e) {
        std::cerr << "numerical guard: " << e.what() << '\n';
        return 2;
    } catch (const mfgc::StabilityDisagreement& e) {
        std::cerr << "numerical guard: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
