// qlever — partitioned thermodynamics of quasi-statically driven fermion
// systems. Subcommands: run, lever, pathdep, sweep, oracle-check.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qlever/runner.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    int grid_override = 0;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_out = true) {
    cmd->add_option("--config", opts.config_path, "JSON experiment config")->required();
    auto* out = cmd->add_option("--out", opts.out_path, "output file");
    if (needs_out) out->required();
    cmd->add_option("--grid", opts.grid_override, "override quadrature grid (power of two)");
    cmd->add_option("--format", opts.format, "output format: csv or plot")
        ->check(CLI::IsMember({"csv", "plot"}));
}

qlever::ExperimentConfig load(const CommonOpts& opts) {
    qlever::ExperimentConfig cfg = qlever::load_config(opts.config_path);
    if (opts.grid_override) {
        cfg.grid = opts.grid_override;
        cfg.validate();
    }
    return cfg;
}

template <typename Result>
void emit(const Result& result, const CommonOpts& opts) {
    if (opts.format == "plot")
        qlever::emit_plotdata(result, opts.out_path);
    else
        qlever::emit_csv(result, opts.out_path);
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Partitioned thermodynamics of driven fermion systems"};
    app.require_subcommand(1);

    CommonOpts run_opts, lever_opts, path_opts, sweep_opts, oracle_opts;
    auto* cmd_run = app.add_subcommand("run", "integrate one protocol");
    add_common(cmd_run, run_opts);
    auto* cmd_lever = app.add_subcommand("lever", "mechanical-advantage scan");
    add_common(cmd_lever, lever_opts);
    auto* cmd_path = app.add_subcommand("pathdep", "compare two protocol paths");
    add_common(cmd_path, path_opts);
    auto* cmd_sweep = app.add_subcommand("sweep", "parameter sweep of integrated totals");
    add_common(cmd_sweep, sweep_opts);
    auto* cmd_oracle =
        app.add_subcommand("oracle-check", "Fock-space cross-check of the model");
    add_common(cmd_oracle, oracle_opts, /*needs_out=*/false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            auto result = qlever::run_protocol(load(run_opts));
            print_warnings(result.warnings);
            emit(result, run_opts);
            std::cout << "W_ext = " << qlever::format_double(result.totals.W_ext)
                      << "  (quadrature error estimate "
                      << qlever::format_double(result.richardson_error) << ")\n";
        } else if (cmd_lever->parsed()) {
            auto scan = qlever::run_lever_scan(load(lever_opts));
            emit(scan, lever_opts);
            std::cout << "max eta = " << qlever::format_double(scan.max_eta) << '\n';
        } else if (cmd_path->parsed()) {
            auto cmp = qlever::run_path_dependence(load(path_opts));
            print_warnings(cmp.a.warnings);
            print_warnings(cmp.b.warnings);
            emit(cmp, path_opts);
            for (size_t g = 0; g < cmp.a.labels.size(); ++g)
                std::cout << "|W_" << cmp.a.labels[g] << "(A) - (B)| = "
                          << qlever::format_double(cmp.work_diff[g]) << '\n';
        } else if (cmd_sweep->parsed()) {
            auto sweep = qlever::run_sweep(load(sweep_opts));
            emit(sweep, sweep_opts);
            std::cout << sweep.rows.size() << " sweep points written\n";
        } else if (cmd_oracle->parsed()) {
            auto report = qlever::oracle_check(load(oracle_opts));
            std::cout << "oracle check passed at " << report.points_checked
                      << " path points (max global error "
                      << qlever::format_double(report.max_global_error)
                      << ", max partitioned error "
                      << qlever::format_double(report.max_partitioned_error) << ")\n";
        }
    } catch (const qlever::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const qlever::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
