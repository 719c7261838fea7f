#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qlever/runner.hpp"
#include "test_helpers.hpp"

using namespace qlever;
using namespace testutil;

namespace {

const char* kTwoLevelJson = R"({
  "model": {
    "sites": ["1", "2"],
    "onsite": {"1": "eps1", "2": "eps2"},
    "bonds": [["1", "2", "w"]]
  },
  "partition": {"labels": ["S", "Sbar"], "assignment": {"1": "S", "2": "Sbar"}},
  "reservoir": {"T": 0.2, "mu": 0.0},
  "protocol": {
    "driven": ["eps1"],
    "waypoints": [
      {"s": 0.0, "params": {"eps1": -0.5, "eps2": 1.0, "w": 1.0}},
      {"s": 1.0, "params": {"eps1": 0.5, "eps2": 1.0, "w": 1.0}}
    ]
  },
  "grid": 256
})";

ExperimentConfig two_level_config(double grid = 256) {
    ExperimentConfig cfg = parse_config(kTwoLevelJson);
    cfg.grid = static_cast<int>(grid);
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("qlever_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("config parsing") {
    ExperimentConfig cfg = parse_config(kTwoLevelJson);
    CHECK(cfg.model.sites.size() == 2);
    CHECK(cfg.partition.labels == std::vector<std::string>{"S", "Sbar"});
    CHECK(cfg.reservoir.temperature == 0.2);
    CHECK(cfg.protocols.size() == 1);
    CHECK(cfg.grid == 256);
    CHECK(cfg.drive_label(cfg.protocols[0]) == "S");
}

TEST_CASE("config rejects unknown keys") {
    std::string bad = kTwoLevelJson;
    bad.insert(bad.rfind('}'), R"(, "tempreature": 0.1)");
    CHECK_THROWS_WITH_AS(parse_config(bad), doctest::Contains("tempreature"),
                         ValidationError);
}

TEST_CASE("config validates the grid") {
    ExperimentConfig cfg = two_level_config();
    cfg.grid = 100; // not a power of two
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.grid = 8; // too small
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("config rejects a driven parameter the model never uses") {
    ExperimentConfig cfg = two_level_config();
    cfg.protocols[0].driven.insert("ghost");
    for (auto& wp : cfg.protocols[0].waypoints) wp.params["ghost"] = 0.0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("ghost"), ValidationError);
}

TEST_CASE("constant protocol integrates to zero") {
    ExperimentConfig cfg = two_level_config();
    cfg.protocols[0].driven.clear();
    for (auto& wp : cfg.protocols[0].waypoints) wp.params["eps1"] = 0.3;
    RunResult r = run_protocol(cfg);
    CHECK(std::abs(r.totals.W_ext) <= 1e-15);
    for (size_t g = 0; g < r.labels.size(); ++g) {
        CHECK(std::abs(r.totals.dU[g]) <= 1e-15);
        CHECK(std::abs(r.totals.W[g]) <= 1e-15);
        CHECK(std::abs(r.totals.dN[g]) <= 1e-15);
    }
}

TEST_CASE("integrated external work equals the endpoint grand-potential change") {
    ExperimentConfig cfg = two_level_config();
    RunResult r = run_protocol(cfg);
    double d_omega = r.omega_end - r.omega_start;
    CHECK(std::abs(r.totals.W_ext - d_omega) <=
          std::max(r.richardson_error * 4, 1e-12));
}

TEST_CASE("quadrature convergence under grid doubling") {
    ExperimentConfig cfg = two_level_config(256);
    RunResult coarse = run_protocol(cfg);
    cfg.grid = 512;
    RunResult fine = run_protocol(cfg);
    CHECK(std::abs(fine.totals.W_ext - coarse.totals.W_ext) <=
          4 * coarse.richardson_error + 1e-15);
    for (size_t g = 0; g < coarse.labels.size(); ++g) {
        CHECK(std::abs(fine.totals.W[g] - coarse.totals.W[g]) <=
              4 * coarse.richardson_error + 1e-15);
        CHECK(std::abs(fine.totals.dU[g] - coarse.totals.dU[g]) <=
              4 * coarse.richardson_error + 1e-15);
    }
}

TEST_CASE("integrated First Law per subsystem") {
    ExperimentConfig cfg = two_level_config(1024);
    RunResult r = run_protocol(cfg);
    for (size_t g = 0; g < r.labels.size(); ++g) {
        double lhs = r.totals.dU[g];
        double rhs = 0.2 * r.totals.dS[g] + 0.0 * r.totals.dN[g] + r.totals.W[g];
        CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
}

TEST_CASE("csv emission") {
    ExperimentConfig cfg = two_level_config(64);
    RunResult r = run_protocol(cfg);
    TempFile tmp("run.csv");
    emit_csv(r, tmp.path);
    std::string text = slurp(tmp.path);
    CHECK(text.rfind("s,eps1,U_S,S_S,N_S,Omega_S,U_rate_S,TS_rate_S,N_rate_S,W_rate_S,"
                     "power_part_S,nonlocal_rate_S,first_law_residual_S,", 0) == 0);
    CHECK(text.find("W_ext_rate,sum_rule_residual,eta") != std::string::npos);
    CHECK(text.find("\r\n") == std::string::npos); // LF endings

    SUBCASE("byte-identical across runs") {
        RunResult again = run_protocol(cfg);
        TempFile tmp2("run2.csv");
        emit_csv(again, tmp2.path);
        CHECK(slurp(tmp2.path) == text);
    }
    SUBCASE("values round-trip bit-exactly") {
        std::istringstream in(text);
        std::string header, line;
        std::getline(in, header);
        std::getline(in, line);
        std::istringstream fields(line);
        std::string field;
        std::getline(fields, field, ','); // s
        CHECK(std::stod(field) == r.series.front().s);
        std::getline(fields, field, ','); // eps1
        CHECK(std::stod(field) == r.series.front().driven_params.at("eps1"));
        std::getline(fields, field, ','); // U_S
        CHECK(std::stod(field) == r.series.front().states[0].U);
    }
}

TEST_CASE("format_double round-trips") {
    for (double x : {0.1, -1.0 / 3.0, 1e-300, 12345.678901234567, 2.0}) {
        CHECK(std::stod(format_double(x)) == x);
    }
}

TEST_CASE("plot-data emission has per-curve blocks") {
    ExperimentConfig cfg = two_level_config(64);
    RunResult r = run_protocol(cfg);
    TempFile tmp("run.dat");
    emit_plotdata(r, tmp.path);
    std::string text = slurp(tmp.path);
    CHECK(text.find("# curve: W_rate_S") != std::string::npos);
    CHECK(text.find("# curve: eta") != std::string::npos);
}

TEST_CASE("sweep overrides mu and model parameters") {
    ExperimentConfig cfg = two_level_config(64);
    cfg.sweep = SweepSpec{"mu", {-1.0, 0.0, 1.0}};
    SweepResult sr = run_sweep(cfg);
    CHECK(sr.rows.size() == 3);
    CHECK(sr.rows[0].value == -1.0);

    cfg.sweep = SweepSpec{"eps2", {-0.5, 0.5}};
    SweepResult sr2 = run_sweep(cfg);
    CHECK(sr2.rows.size() == 2);

    cfg.sweep = SweepSpec{"eps1", {0.0}}; // driven parameter: rejected
    CHECK_THROWS_AS(run_sweep(cfg), ValidationError);
}

TEST_CASE("sweep values range form expands inclusively") {
    std::string json = kTwoLevelJson;
    json.insert(json.rfind('}'),
                R"(, "sweep": {"parameter": "mu",
                    "values": {"start": -2.0, "stop": 2.0, "step": 0.05}})");
    ExperimentConfig cfg = parse_config(json);
    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->values.size() == 81);
    CHECK(cfg.sweep->values.front() == doctest::Approx(-2.0));
    CHECK(cfg.sweep->values.back() == doctest::Approx(2.0));
}

TEST_CASE("lever scan on the two-level lever") {
    ExperimentConfig cfg = two_level_config(256);
    cfg.reservoir = Reservoir(1e-4, 0.0);
    cfg.protocols[0].waypoints[0].params = {{"eps1", 5.0}, {"eps2", -10.0}, {"w", 1.0}};
    cfg.protocols[0].waypoints[1].params = {{"eps1", 0.1}, {"eps2", -10.0}, {"w", 1.0}};
    LeverScan scan = run_lever_scan(cfg);
    CHECK(scan.driven_name == "eps1");
    CHECK(scan.max_eta > 1.5);
    CHECK(scan.max_eta < 2.02);
    CHECK(scan.points.front().driven_value == doctest::Approx(5.0));
    CHECK(scan.points.back().driven_value == doctest::Approx(0.1));
}

TEST_CASE("path dependence requires matching endpoints") {
    ExperimentConfig cfg = two_level_config(64);
    Protocol other = cfg.protocols[0];
    other.waypoints[1].params["eps1"] = 9.0;
    cfg.protocols.push_back(other);
    CHECK_THROWS_AS(run_path_dependence(cfg), ValidationError);
}

TEST_CASE("identical paths agree to quadrature error") {
    ExperimentConfig cfg = two_level_config(64);
    cfg.protocols.push_back(cfg.protocols[0]);
    PathComparison cmp = run_path_dependence(cfg);
    for (size_t g = 0; g < cmp.a.labels.size(); ++g) {
        CHECK(cmp.work_diff[g] <= cmp.combined_quadrature_error + 1e-15);
        CHECK(std::abs(cmp.power_diff[g]) <= cmp.combined_quadrature_error + 1e-15);
    }
}

TEST_CASE("oracle check passes for the two-level model") {
    ExperimentConfig cfg = two_level_config(64);
    OracleReport report = oracle_check(cfg);
    CHECK(report.points_checked == 3);
    CHECK(report.max_global_error <= 1e-10 * 2);
    CHECK(report.max_partitioned_error <= 1e-10 * 2);
}
