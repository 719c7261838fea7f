#include "qlever/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "qlever/fock.hpp"

#include <json.hpp>

namespace qlever {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ValidationError("unknown key '" + it.key() + "' in " + where);
}

ParamExpr parse_expr(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    throw ValidationError(where + ": expected a number or parameter name");
}

ModelSpec parse_model(const json& j) {
    reject_unknown_keys(j, {"sites", "onsite", "bonds"}, "model");
    ModelSpec spec;
    spec.sites = j.at("sites").get<std::vector<std::string>>();
    if (j.contains("onsite"))
        for (auto it = j["onsite"].begin(); it != j["onsite"].end(); ++it)
            spec.onsite[it.key()] = parse_expr(it.value(), "onsite[" + it.key() + "]");
    if (j.contains("bonds"))
        for (const auto& b : j["bonds"]) {
            if (!b.is_array() || b.size() != 3)
                throw ValidationError("each bond must be [site_a, site_b, amplitude]");
            spec.bonds.push_back({b[0].get<std::string>(), b[1].get<std::string>(),
                                  parse_expr(b[2], "bond amplitude")});
        }
    spec.validate();
    return spec;
}

Partition parse_partition(const json& j, const ModelSpec& spec) {
    reject_unknown_keys(j, {"labels", "assignment"}, "partition");
    Partition part;
    for (auto it = j.at("assignment").begin(); it != j.at("assignment").end(); ++it)
        part.assignment[it.key()] = it.value().get<std::string>();
    if (j.contains("labels")) {
        part.labels = j["labels"].get<std::vector<std::string>>();
    } else {
        // Order of first appearance along the site list.
        for (const auto& site : spec.sites) {
            auto it = part.assignment.find(site);
            if (it != part.assignment.end() &&
                std::find(part.labels.begin(), part.labels.end(), it->second) ==
                    part.labels.end())
                part.labels.push_back(it->second);
        }
    }
    part.validate(spec);
    return part;
}

Protocol parse_protocol(const json& j) {
    reject_unknown_keys(j, {"driven", "waypoints"}, "protocol");
    Protocol proto;
    if (j.contains("driven"))
        for (const auto& name : j["driven"]) proto.driven.insert(name.get<std::string>());
    for (const auto& wj : j.at("waypoints")) {
        reject_unknown_keys(wj, {"s", "params"}, "waypoint");
        Waypoint wp;
        wp.s = wj.at("s").get<double>();
        for (auto it = wj.at("params").begin(); it != wj.at("params").end(); ++it)
            wp.params[it.key()] = it.value().get<double>();
        proto.waypoints.push_back(wp);
    }
    proto.validate();
    return proto;
}

SweepSpec parse_sweep(const json& j) {
    reject_unknown_keys(j, {"parameter", "values"}, "sweep");
    SweepSpec sweep;
    sweep.parameter = j.at("parameter").get<std::string>();
    const json& v = j.at("values");
    if (v.is_array()) {
        sweep.values = v.get<std::vector<double>>();
    } else if (v.is_object()) {
        reject_unknown_keys(v, {"start", "stop", "step"}, "sweep.values");
        double start = v.at("start").get<double>();
        double stop = v.at("stop").get<double>();
        double step = v.at("step").get<double>();
        if (!(step > 0.0)) throw ValidationError("sweep step must be > 0");
        int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (int i = 0; i < count; ++i) sweep.values.push_back(start + i * step);
    } else {
        throw ValidationError("sweep.values must be an array or {start, stop, step}");
    }
    for (double x : sweep.values)
        if (!std::isfinite(x)) throw ValidationError("sweep values must be finite");
    return sweep;
}

bool is_power_of_two(int x) { return x > 0 && (x & (x - 1)) == 0; }

} // namespace

void ExperimentConfig::validate() const {
    model.validate();
    partition.validate(model);
    if (protocols.empty() || protocols.size() > 2)
        throw ValidationError("config needs one protocol (or two for path-dependence)");
    for (const auto& proto : protocols) {
        proto.validate();
        // Every driven name must be referenced by the model.
        for (const auto& name : proto.driven) {
            bool used = false;
            for (const auto& [site, expr] : model.onsite)
                if (std::holds_alternative<std::string>(expr) &&
                    std::get<std::string>(expr) == name)
                    used = true;
            for (const auto& b : model.bonds)
                if (std::holds_alternative<std::string>(b.amplitude) &&
                    std::get<std::string>(b.amplitude) == name)
                    used = true;
            if (!used)
                throw ValidationError("driven parameter '" + name +
                                      "' is not referenced by the model");
        }
    }
    if (grid < 16 || !is_power_of_two(grid))
        throw ValidationError("grid must be a power of two >= 16");
}

std::string ExperimentConfig::drive_label(const Protocol& protocol) const {
    std::set<std::string> touched;
    for (const auto& [site, expr] : model.onsite)
        if (std::holds_alternative<std::string>(expr) &&
            protocol.driven.count(std::get<std::string>(expr)))
            touched.insert(partition.assignment.at(site));
    for (const auto& b : model.bonds)
        if (std::holds_alternative<std::string>(b.amplitude) &&
            protocol.driven.count(std::get<std::string>(b.amplitude))) {
            touched.insert(partition.assignment.at(b.site_a));
            touched.insert(partition.assignment.at(b.site_b));
        }
    return touched.size() == 1 ? *touched.begin() : std::string{};
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown_keys(
        j, {"model", "partition", "reservoir", "protocol", "grid", "sweep", "outputs", "seed"},
        "config");

    ExperimentConfig cfg;
    cfg.model = parse_model(j.at("model"));
    cfg.partition = parse_partition(j.at("partition"), cfg.model);

    const json& rj = j.at("reservoir");
    reject_unknown_keys(rj, {"T", "mu"}, "reservoir");
    cfg.reservoir = Reservoir(rj.at("T").get<double>(), rj.at("mu").get<double>());

    const json& pj = j.at("protocol");
    if (pj.is_array())
        for (const auto& one : pj) cfg.protocols.push_back(parse_protocol(one));
    else
        cfg.protocols.push_back(parse_protocol(pj));

    if (j.contains("grid")) cfg.grid = j["grid"].get<int>();
    if (j.contains("sweep") && !j["sweep"].is_null()) cfg.sweep = parse_sweep(j["sweep"]);
    if (j.contains("outputs")) cfg.outputs = j["outputs"].get<std::vector<std::string>>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Integration

namespace {

struct SegmentPlan {
    double a, b;
    int m; // even number of Simpson subintervals
    Matrix hdot;
};

std::vector<SegmentPlan> plan_segments(const ModelSpec& spec, const Protocol& proto,
                                       int n_total) {
    std::vector<double> bp = proto.breakpoints();
    std::vector<SegmentPlan> plans;
    for (size_t i = 0; i + 1 < bp.size(); ++i) {
        SegmentPlan sp;
        sp.a = bp[i];
        sp.b = bp[i + 1];
        double len = sp.b - sp.a;
        sp.m = 2 * std::max(1L, std::lround(n_total * len / 2.0));
        sp.hdot = build_drive_matrix(spec, proto.dparams_at(0.5 * (sp.a + sp.b)));
        plans.push_back(sp);
    }
    return plans;
}

void check_pointwise(const PointRecord& rec, const SpectralFrame& frame,
                     const std::vector<std::string>& labels) {
    // Per-subsystem First Law, at round-off.
    for (size_t g = 0; g < labels.size(); ++g) {
        double scale = std::max({1.0, std::abs(rec.rates[g].U_rate), frame.h_scale});
        if (std::abs(rec.first_law[g]) > 1e-11 * scale) {
            std::ostringstream os;
            os << "First Law violated for '" << labels[g] << "' at s=" << rec.s
               << ": residual " << rec.first_law[g];
            throw NumericalError(os.str());
        }
    }
    // Additivity of states and rates.
    double sU = 0, sS = 0, sN = 0, sO = 0, rU = 0, rTS = 0, rN = 0, rO = 0;
    for (size_t g = 0; g < labels.size(); ++g) {
        sU += rec.states[g].U;
        sS += rec.states[g].S;
        sN += rec.states[g].N;
        sO += rec.states[g].Omega;
        rU += rec.rates[g].U_rate;
        rTS += rec.rates[g].TS_rate;
        rN += rec.rates[g].N_rate;
        rO += rec.rates[g].Omega_rate;
    }
    auto check = [&](double lhs, double rhs, const char* what) {
        double scale = std::max({1.0, std::abs(rhs), frame.h_scale});
        if (std::abs(lhs - rhs) > 1e-11 * scale) {
            std::ostringstream os;
            os << "additivity violated for " << what << " at s=" << rec.s << ": "
               << lhs << " vs " << rhs;
            throw NumericalError(os.str());
        }
    };
    check(sU, rec.global.U, "U");
    check(sS, rec.global.S, "S");
    check(sN, rec.global.N, "N");
    check(sO, rec.global.Omega, "Omega");
    check(rU, rec.global_rates_.U_rate, "U_rate");
    check(rTS, rec.global_rates_.TS_rate, "TS_rate");
    check(rN, rec.global_rates_.N_rate, "N_rate");
    check(rO, rec.global_rates_.Omega_rate, "Omega_rate");
}

struct Integration {
    std::vector<PointRecord> series;
    IntegratedTotals totals;
    double omega_start = 0.0, omega_end = 0.0;
    std::vector<std::string> warnings;
};

Integration integrate_protocol(const ExperimentConfig& cfg, const Protocol& proto,
                               int n_total, bool keep_series) {
    const auto& labels = cfg.partition.labels;
    std::map<std::string, Matrix> projectors;
    for (const auto& gamma : labels)
        projectors[gamma] = projector(cfg.model, cfg.partition, gamma);
    const std::string drive = cfg.drive_label(proto);

    Integration out;
    size_t ng = labels.size();
    out.totals.dU.assign(ng, 0.0);
    out.totals.dS.assign(ng, 0.0);
    out.totals.dN.assign(ng, 0.0);
    out.totals.W.assign(ng, 0.0);
    out.totals.power.assign(ng, 0.0);
    out.totals.nonlocal.assign(ng, 0.0);

    Matrix prev_vectors;
    bool first_point = true;

    for (const auto& seg : plan_segments(cfg.model, proto, n_total)) {
        double h_step = (seg.b - seg.a) / seg.m;
        for (int j = 0; j <= seg.m; ++j) {
            double s = (j == seg.m) ? seg.b : seg.a + j * h_step;
            ParamMap params = proto.params_at(s);
            Matrix h = build_hamiltonian(cfg.model, params);
            SpectralFrame frame = make_frame(h, seg.hdot, s);
            if (!first_point) {
                GaugeAlignResult ga = gauge_align(prev_vectors, frame.vectors);
                frame.vectors = ga.vectors;
                frame.drive_elems = frame.vectors.adjoint() * seg.hdot * frame.vectors;
                for (int k : ga.weak_overlap) {
                    std::ostringstream os;
                    os << "weak eigenstate overlap for level " << k << " near s=" << s;
                    out.warnings.push_back(os.str());
                }
            }
            prev_vectors = frame.vectors;

            PointRecord rec;
            rec.s = s;
            for (const auto& name : proto.driven) rec.driven_params[name] = params.at(name);
            rec.global = global_state(frame.energies, cfg.reservoir);
            rec.global_rates_ = global_rates(frame, cfg.reservoir);
            rec.work = work_record(frame, projectors, labels, cfg.reservoir);
            for (const auto& gamma : labels) {
                const Matrix& pi = projectors.at(gamma);
                Vector p = prob_weights(frame, pi);
                Vector pdot = prob_rates(frame, pi);
                rec.states.push_back(subsystem_state(frame, p, gamma, cfg.reservoir));
                rec.rates.push_back(subsystem_rates(frame, p, pdot, gamma, cfg.reservoir));
                rec.first_law.push_back(first_law_residual(rec.rates.back(), cfg.reservoir));
            }
            if (!drive.empty())
                rec.eta = mechanical_advantage(rec.work, frame.h_scale, drive);
            check_pointwise(rec, frame, labels);

            if (first_point) out.omega_start = rec.global.Omega;
            out.omega_end = rec.global.Omega;
            first_point = false;

            // Composite Simpson weight on this segment.
            double coef = (j == 0 || j == seg.m) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
            double wgt = coef * h_step / 3.0;
            for (size_t g = 0; g < ng; ++g) {
                out.totals.dU[g] += wgt * rec.rates[g].U_rate;
                out.totals.dS[g] += wgt * rec.rates[g].TS_rate / cfg.reservoir.temperature;
                out.totals.dN[g] += wgt * rec.rates[g].N_rate;
                out.totals.W[g] += wgt * rec.work.subsystems[g].work_rate;
                out.totals.power[g] += wgt * rec.work.subsystems[g].partitioned_power;
                out.totals.nonlocal[g] += wgt * rec.work.subsystems[g].nonlocal_rate;
            }
            out.totals.W_ext += wgt * rec.global_rates_.W_ext_rate;

            if (keep_series) out.series.push_back(std::move(rec));
        }
    }
    return out;
}

double totals_distance(const IntegratedTotals& a, const IntegratedTotals& b) {
    double d = std::abs(a.W_ext - b.W_ext);
    for (size_t g = 0; g < a.W.size(); ++g) {
        d = std::max(d, std::abs(a.dU[g] - b.dU[g]));
        d = std::max(d, std::abs(a.dS[g] - b.dS[g]));
        d = std::max(d, std::abs(a.dN[g] - b.dN[g]));
        d = std::max(d, std::abs(a.W[g] - b.W[g]));
        d = std::max(d, std::abs(a.power[g] - b.power[g]));
        d = std::max(d, std::abs(a.nonlocal[g] - b.nonlocal[g]));
    }
    return d;
}

RunResult run_one(const ExperimentConfig& cfg, const Protocol& proto, bool keep_series) {
    Integration fine = integrate_protocol(cfg, proto, cfg.grid, keep_series);
    Integration coarse = integrate_protocol(cfg, proto, cfg.grid / 2, false);

    RunResult result;
    result.labels = cfg.partition.labels;
    result.driven_names.assign(proto.driven.begin(), proto.driven.end());
    result.drive_label = cfg.drive_label(proto);
    result.series = std::move(fine.series);
    result.totals = fine.totals;
    result.richardson_error = totals_distance(fine.totals, coarse.totals) / 15.0;
    result.omega_start = fine.omega_start;
    result.omega_end = fine.omega_end;
    result.warnings = std::move(fine.warnings);
    return result;
}

} // namespace

RunResult run_protocol(const ExperimentConfig& config) {
    if (config.protocols.size() != 1)
        throw ValidationError("run_protocol expects exactly one protocol");
    return run_one(config, config.protocols[0], true);
}

LeverScan run_lever_scan(const ExperimentConfig& config) {
    if (config.protocols.size() != 1)
        throw ValidationError("run_lever_scan expects exactly one protocol");
    const Protocol& proto = config.protocols[0];
    if (proto.driven.size() != 1)
        throw ValidationError("lever scan requires exactly one driven parameter");
    const std::string name = *proto.driven.begin();

    RunResult run = run_one(config, proto, true);
    if (run.drive_label.empty())
        throw ValidationError("lever scan: driven parameter spans more than one subsystem");

    LeverScan scan;
    scan.driven_name = name;
    scan.max_eta = -std::numeric_limits<double>::infinity();
    for (const auto& rec : run.series) {
        LeverPoint pt;
        pt.s = rec.s;
        pt.driven_value = rec.driven_params.at(name);
        pt.eta = rec.eta;
        if (pt.eta) scan.max_eta = std::max(scan.max_eta, *pt.eta);
        scan.points.push_back(pt);
    }
    return scan;
}

PathComparison run_path_dependence(const ExperimentConfig& config) {
    if (config.protocols.size() != 2)
        throw ValidationError("path-dependence run requires exactly two protocols");
    const Protocol& pa = config.protocols[0];
    const Protocol& pb = config.protocols[1];
    for (double s : {0.0, 1.0}) {
        ParamMap a = pa.params_at(s), b = pb.params_at(s);
        if (a != b)
            throw ValidationError("path-dependence protocols must share endpoints at s=" +
                                  std::to_string(s));
    }

    PathComparison cmp;
    cmp.a = run_one(config, pa, true);
    cmp.b = run_one(config, pb, true);
    cmp.combined_quadrature_error = cmp.a.richardson_error + cmp.b.richardson_error;
    size_t ng = config.partition.labels.size();
    for (size_t g = 0; g < ng; ++g) {
        cmp.work_diff.push_back(std::abs(cmp.a.totals.W[g] - cmp.b.totals.W[g]));
        cmp.power_diff.push_back(cmp.a.totals.power[g] - cmp.b.totals.power[g]);
        cmp.nonlocal_diff.push_back(cmp.a.totals.nonlocal[g] - cmp.b.totals.nonlocal[g]);
    }
    return cmp;
}

SweepResult run_sweep(const ExperimentConfig& config) {
    if (!config.sweep) throw ValidationError("config has no sweep block");
    if (config.protocols.size() != 1)
        throw ValidationError("sweep expects exactly one protocol");
    const SweepSpec& sweep = *config.sweep;
    const Protocol& proto = config.protocols[0];
    if (proto.driven.count(sweep.parameter))
        throw ValidationError("sweep parameter '" + sweep.parameter + "' is driven");

    SweepResult result;
    result.parameter = sweep.parameter;
    result.labels = config.partition.labels;
    for (double value : sweep.values) {
        ExperimentConfig cfg = config;
        cfg.sweep.reset();
        if (sweep.parameter == "mu") {
            cfg.reservoir = Reservoir(config.reservoir.temperature, value);
        } else if (sweep.parameter == "T") {
            cfg.reservoir = Reservoir(value, config.reservoir.chemical_potential);
        } else {
            for (auto& wp : cfg.protocols[0].waypoints) wp.params[sweep.parameter] = value;
        }
        RunResult run = run_one(cfg, cfg.protocols[0], false);
        result.rows.push_back({value, run.totals, run.richardson_error});
    }
    return result;
}

OracleReport oracle_check(const ExperimentConfig& config) {
    if (config.protocols.size() != 1)
        throw ValidationError("oracle_check expects exactly one protocol");
    if (config.model.dimension() > 12)
        throw ValidationError("oracle_check: model too large for Fock-space oracle");
    const Protocol& proto = config.protocols[0];

    OracleReport report;
    const int n = config.model.dimension();
    const Matrix identity = Matrix::Identity(n, n);
    for (double s : {0.0, 0.5, 1.0}) {
        Matrix h = build_hamiltonian(config.model, proto.params_at(s));
        EighResult eig = eigh(h);
        GlobalState g = global_state(eig.energies, config.reservoir);

        FockSystem sys = fock_build(h);
        GrandDensity rho = grand_density(sys, config.reservoir);
        double U_f = fock_expect(rho, sys.hamiltonian);
        double N_f = (rho.rho.diagonal().real().array() *
                      sys.number_operator.array()).sum();
        double S_f = von_neumann_entropy(rho);
        double Om_f = rho.grand_potential;

        double scale = std::max(1.0, max_abs(h));
        double tol = 1e-10 * scale;
        auto check = [&](double ours, double oracle, const std::string& what) {
            double err = std::abs(ours - oracle);
            report.max_global_error = std::max(report.max_global_error, err);
            if (err > tol)
                throw NumericalError("oracle mismatch for " + what + " at s=" +
                                     std::to_string(s) + ": " + std::to_string(err));
        };
        check(g.U, U_f, "U");
        check(g.N, N_f, "N");
        check(g.S, S_f, "S");
        check(g.Omega, Om_f, "Omega");

        SpectralFrame frame = make_frame(h, Matrix::Zero(n, n), s);
        double sum_S = 0.0;
        for (const auto& gamma : config.partition.labels) {
            Matrix pi = projector(config.model, config.partition, gamma);
            Vector p = prob_weights(frame, pi);
            SubsystemState st = subsystem_state(frame, p, gamma, config.reservoir);
            sum_S += st.S;
            double U_g = fock_expect(rho, fock_one_body(0.5 * (pi * h + h * pi)));
            double N_g = fock_expect(rho, fock_one_body(0.5 * (pi * identity + identity * pi)));
            double err = std::max(std::abs(st.U - U_g), std::abs(st.N - N_g));
            report.max_partitioned_error = std::max(report.max_partitioned_error, err);
            if (err > tol)
                throw NumericalError("oracle mismatch for subsystem '" + gamma +
                                     "' at s=" + std::to_string(s));
        }
        double s_err = std::abs(sum_S - S_f);
        report.max_entropy_error = std::max(report.max_entropy_error, s_err);
        if (s_err > 1e-10)
            throw NumericalError("oracle mismatch for summed entropy at s=" +
                                 std::to_string(s));
        ++report.points_checked;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Output

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // LF line endings everywhere
    if (!out) throw ValidationError("cannot open output file '" + path + "'");
    return out;
}

std::vector<std::string> run_columns(const RunResult& r) {
    std::vector<std::string> cols{"s"};
    for (const auto& name : r.driven_names) cols.push_back(name);
    for (const auto& l : r.labels)
        for (const char* q : {"U", "S", "N", "Omega", "U_rate", "TS_rate", "N_rate",
                              "W_rate", "power_part", "nonlocal_rate",
                              "first_law_residual"})
            cols.push_back(std::string(q) + "_" + l);
    cols.insert(cols.end(), {"W_ext_rate", "sum_rule_residual", "eta"});
    return cols;
}

std::vector<double> run_row(const RunResult& r, const PointRecord& rec) {
    std::vector<double> row{rec.s};
    for (const auto& name : r.driven_names) row.push_back(rec.driven_params.at(name));
    for (size_t g = 0; g < r.labels.size(); ++g) {
        row.push_back(rec.states[g].U);
        row.push_back(rec.states[g].S);
        row.push_back(rec.states[g].N);
        row.push_back(rec.states[g].Omega);
        row.push_back(rec.rates[g].U_rate);
        row.push_back(rec.rates[g].TS_rate);
        row.push_back(rec.rates[g].N_rate);
        row.push_back(rec.work.subsystems[g].work_rate);
        row.push_back(rec.work.subsystems[g].partitioned_power);
        row.push_back(rec.work.subsystems[g].nonlocal_rate);
        row.push_back(rec.first_law[g]);
    }
    row.push_back(rec.global_rates_.W_ext_rate);
    row.push_back(rec.work.sum_rule_residual);
    row.push_back(rec.eta ? *rec.eta : std::numeric_limits<double>::quiet_NaN());
    return row;
}

void write_csv_line(std::ofstream& out, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << fields[i];
    }
    out << '\n';
}

void write_csv_row(std::ofstream& out, const std::vector<double>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << format_double(row[i]);
    }
    out << '\n';
}

} // namespace

void emit_csv(const RunResult& result, const std::string& path) {
    auto out = open_out(path);
    write_csv_line(out, run_columns(result));
    for (const auto& rec : result.series) write_csv_row(out, run_row(result, rec));
}

void emit_plotdata(const RunResult& result, const std::string& path) {
    auto out = open_out(path);
    std::vector<std::string> cols = run_columns(result);
    for (size_t c = 1; c < cols.size(); ++c) {
        out << "# curve: " << cols[c] << "\n# columns: s " << cols[c] << "\n";
        for (const auto& rec : result.series) {
            std::vector<double> row = run_row(result, rec);
            out << format_double(row[0]) << ' ' << format_double(row[c]) << '\n';
        }
        out << '\n';
    }
}

namespace {

std::vector<std::string> sweep_columns(const SweepResult& r) {
    std::vector<std::string> cols{r.parameter};
    for (const auto& l : r.labels)
        for (const char* q : {"dU", "dS", "dN", "W", "int_power", "int_nonlocal"})
            cols.push_back(std::string(q) + "_" + l);
    cols.insert(cols.end(), {"W_ext", "quadrature_error"});
    return cols;
}

std::vector<double> sweep_row(const SweepResult& r, const SweepRow& row) {
    std::vector<double> v{row.value};
    for (size_t g = 0; g < r.labels.size(); ++g) {
        v.push_back(row.totals.dU[g]);
        v.push_back(row.totals.dS[g]);
        v.push_back(row.totals.dN[g]);
        v.push_back(row.totals.W[g]);
        v.push_back(row.totals.power[g]);
        v.push_back(row.totals.nonlocal[g]);
    }
    v.push_back(row.totals.W_ext);
    v.push_back(row.richardson_error);
    return v;
}

} // namespace

void emit_csv(const SweepResult& result, const std::string& path) {
    auto out = open_out(path);
    write_csv_line(out, sweep_columns(result));
    for (const auto& row : result.rows) write_csv_row(out, sweep_row(result, row));
}

void emit_plotdata(const SweepResult& result, const std::string& path) {
    auto out = open_out(path);
    std::vector<std::string> cols = sweep_columns(result);
    for (size_t c = 1; c < cols.size(); ++c) {
        out << "# curve: " << cols[c] << "\n# columns: " << result.parameter << ' '
            << cols[c] << "\n";
        for (const auto& row : result.rows) {
            std::vector<double> v = sweep_row(result, row);
            out << format_double(v[0]) << ' ' << format_double(v[c]) << '\n';
        }
        out << '\n';
    }
}

void emit_csv(const LeverScan& result, const std::string& path) {
    auto out = open_out(path);
    write_csv_line(out, {"s", result.driven_name, "eta"});
    for (const auto& pt : result.points)
        write_csv_row(out, {pt.s, pt.driven_value,
                            pt.eta ? *pt.eta : std::numeric_limits<double>::quiet_NaN()});
}

void emit_plotdata(const LeverScan& result, const std::string& path) {
    auto out = open_out(path);
    out << "# curve: eta\n# columns: " << result.driven_name << " eta\n";
    for (const auto& pt : result.points)
        if (pt.eta)
            out << format_double(pt.driven_value) << ' ' << format_double(*pt.eta) << '\n';
    out << '\n';
}

void emit_csv(const PathComparison& result, const std::string& path) {
    auto out = open_out(path);
    write_csv_line(out, {"quantity", "label", "path_a", "path_b", "diff"});
    for (size_t g = 0; g < result.a.labels.size(); ++g) {
        const std::string& l = result.a.labels[g];
        out << "W," << l << ',' << format_double(result.a.totals.W[g]) << ','
            << format_double(result.b.totals.W[g]) << ','
            << format_double(result.work_diff[g]) << '\n';
        out << "int_power," << l << ',' << format_double(result.a.totals.power[g]) << ','
            << format_double(result.b.totals.power[g]) << ','
            << format_double(result.power_diff[g]) << '\n';
        out << "int_nonlocal," << l << ',' << format_double(result.a.totals.nonlocal[g])
            << ',' << format_double(result.b.totals.nonlocal[g]) << ','
            << format_double(result.nonlocal_diff[g]) << '\n';
    }
    out << "quadrature_error,," << format_double(result.a.richardson_error) << ','
        << format_double(result.b.richardson_error) << ','
        << format_double(result.combined_quadrature_error) << '\n';
}

void emit_plotdata(const PathComparison& result, const std::string& path) {
    // Path comparisons are small tables; the plot-data form mirrors the CSV.
    auto out = open_out(path);
    out << "# path-dependence comparison\n";
    for (size_t g = 0; g < result.a.labels.size(); ++g) {
        out << "# label: " << result.a.labels[g] << '\n';
        out << "W " << format_double(result.a.totals.W[g]) << ' '
            << format_double(result.b.totals.W[g]) << '\n';
        out << "int_power " << format_double(result.a.totals.power[g]) << ' '
            << format_double(result.b.totals.power[g]) << '\n';
        out << "int_nonlocal " << format_double(result.a.totals.nonlocal[g]) << ' '
            << format_double(result.b.totals.nonlocal[g]) << '\n';
    }
}

} // namespace qlever
