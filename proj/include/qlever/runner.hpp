// runner.hpp — Protocol integration, sweeps, lever scans, JSON config
// parsing, and CSV / plot-data emission.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlever/model.hpp"
#include "qlever/partition_thermo.hpp"
#include "qlever/work.hpp"

namespace qlever {

struct SweepSpec {
    std::string parameter; // "mu", "T", or a model parameter name
    std::vector<double> values;
};

struct ExperimentConfig {
    ModelSpec model;
    Partition partition;
    Reservoir reservoir{1.0, 0.0};
    std::vector<Protocol> protocols; // one; two for path-dependence runs
    int grid = 2048;                 // Simpson subintervals, power of two >= 16
    std::optional<SweepSpec> sweep;
    std::vector<std::string> outputs;
    std::uint64_t seed = 0;

    void validate() const;
    // Label of the subsystem whose parameters are driven; empty when the
    // drive touches more than one subsystem.
    std::string drive_label(const Protocol& protocol) const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

// One quadrature node along the protocol.
struct PointRecord {
    double s = 0.0;
    ParamMap driven_params;
    GlobalState global;
    GlobalRates global_rates_;
    std::vector<SubsystemState> states; // label order
    std::vector<SubsystemRates> rates;
    std::vector<double> first_law; // residual per label
    WorkRecord work;
    std::optional<double> eta;
};

struct IntegratedTotals {
    std::vector<double> dU, dS, dN, W, power, nonlocal; // per label
    double W_ext = 0.0;
};

struct RunResult {
    std::vector<std::string> labels;
    std::vector<std::string> driven_names; // column order for CSV
    std::string drive_label;
    std::vector<PointRecord> series;
    IntegratedTotals totals;
    double richardson_error = 0.0; // max over integrated quantities
    double omega_start = 0.0, omega_end = 0.0;
    std::vector<std::string> warnings;
};

RunResult run_protocol(const ExperimentConfig& config);

struct LeverPoint {
    double s = 0.0;
    double driven_value = 0.0;
    std::optional<double> eta;
};

struct LeverScan {
    std::string driven_name;
    std::vector<LeverPoint> points;
    double max_eta = 0.0;
};

LeverScan run_lever_scan(const ExperimentConfig& config);

struct PathComparison {
    RunResult a, b;
    std::vector<double> work_diff;     // |W_gamma(A) - W_gamma(B)| per label
    std::vector<double> power_diff;    // signed, per label
    std::vector<double> nonlocal_diff; // signed, per label
    double combined_quadrature_error = 0.0;
};

PathComparison run_path_dependence(const ExperimentConfig& config);

struct SweepRow {
    double value = 0.0;
    IntegratedTotals totals;
    double richardson_error = 0.0;
};

struct SweepResult {
    std::string parameter;
    std::vector<std::string> labels;
    std::vector<SweepRow> rows;
};

SweepResult run_sweep(const ExperimentConfig& config);

// Fock-space oracle comparison of the configured model at several path
// points; throws NumericalError on disagreement beyond 1e-10 * scale.
struct OracleReport {
    int points_checked = 0;
    double max_global_error = 0.0;
    double max_partitioned_error = 0.0;
    double max_entropy_error = 0.0;
};

OracleReport oracle_check(const ExperimentConfig& config);

void emit_csv(const RunResult& result, const std::string& path);
void emit_plotdata(const RunResult& result, const std::string& path);
void emit_csv(const SweepResult& result, const std::string& path);
void emit_plotdata(const SweepResult& result, const std::string& path);
void emit_csv(const LeverScan& result, const std::string& path);
void emit_plotdata(const LeverScan& result, const std::string& path);
void emit_csv(const PathComparison& result, const std::string& path);
void emit_plotdata(const PathComparison& result, const std::string& path);

// 17-significant-digit rendering; round-trips to the same double.
std::string format_double(double x);

} // namespace qlever
