#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "nirgas/sweep.hpp"

// Command-line front end: sweep the probe detuning and pump rate over a
// five-level gas model and export permittivity, permeability, chirality and
// branch-tracked refractive index per grid point.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure,
// 3 completed but with failed or flagged grid points.

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override,
            const std::string& format_override, int workers_override,
            const std::string& method_override, int phases_override) {
    nirgas::RunConfig cfg = nirgas::load_config(config_path);
    if (!out_override.empty()) cfg.output.path = out_override;
    if (!format_override.empty()) cfg.output.format = format_override;
    if (workers_override >= 0) cfg.workers = workers_override;
    if (!method_override.empty()) {
        if (method_override == "integrate")
            cfg.solver.method = nirgas::SteadyMethod::time_integration;
        else if (method_override == "scf")
            cfg.solver.method = nirgas::SteadyMethod::self_consistent;
        else
            throw nirgas::ConfigError("--method must be integrate or scf");
    }
    if (phases_override > 0) cfg.phases = phases_override;
    cfg.validate();

    const nirgas::SweepResult res = nirgas::run_sweep(cfg);
    if (cfg.output.format == "json")
        nirgas::export_json(res, cfg.output.path);
    else
        nirgas::export_csv(res, cfg.output.path);

    size_t failed = 0;
    for (const auto& row : res.rows)
        if (!row.converged) ++failed;
    std::cout << "wrote " << res.rows.size() << " rows to " << cfg.output.path
              << " (" << failed << " failed, branch flags "
              << (res.any_flagged ? "yes" : "no") << ")\n";
    return (failed > 0 || res.any_flagged) ? 3 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"five-level gas dispersion sweep"};
    app.require_subcommand(1);

    std::string config_path, out_override, format_override, method_override;
    int workers_override = -1;
    int phases_override = 0;

    auto* run = app.add_subcommand("run", "execute the sweep in a config file");
    run->add_option("--config", config_path, "JSON configuration file")
        ->required();
    run->add_option("--out", out_override, "override output.path");
    run->add_option("--format", format_override, "override output.format")
        ->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--workers", workers_override, "override worker count");
    run->add_option("--method", method_override, "override solver.method")
        ->check(CLI::IsMember({"integrate", "scf"}));
    run->add_option("--phases", phases_override, "override loop-phase samples");

    auto* defaults =
        app.add_subcommand("defaults", "print the default configuration");

    std::string validate_path;
    auto* validate =
        app.add_subcommand("validate", "check a configuration file");
    validate->add_option("--config", validate_path, "JSON configuration file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (run->parsed())
            return cmd_run(config_path, out_override, format_override,
                           workers_override, method_override, phases_override);
        if (defaults->parsed()) {
            std::cout << nirgas::config_to_json(nirgas::default_config()).dump(2)
                      << "\n";
            return 0;
        }
        if (validate->parsed()) {
            nirgas::load_config(validate_path).validate();
            std::cout << "configuration valid\n";
            return 0;
        }
    } catch (const nirgas::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const nirgas::UnsupportedConfiguration& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
