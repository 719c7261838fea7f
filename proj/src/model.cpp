#include "qlever/model.hpp"

#include <algorithm>
#include <cmath>

namespace qlever {

namespace {

double resolve(const ParamExpr& expr, const ParamMap& params, const std::string& where) {
    if (std::holds_alternative<double>(expr)) return std::get<double>(expr);
    const std::string& name = std::get<std::string>(expr);
    auto it = params.find(name);
    if (it == params.end())
        throw ValidationError("unresolved parameter '" + name + "' in " + where);
    return it->second;
}

// Slope of a named parameter; constants have slope zero.
double resolve_rate(const ParamExpr& expr, const ParamMap& dparams) {
    if (std::holds_alternative<double>(expr)) return 0.0;
    auto it = dparams.find(std::get<std::string>(expr));
    return it == dparams.end() ? 0.0 : it->second;
}

} // namespace

int ModelSpec::site_index(const std::string& site) const {
    auto it = std::find(sites.begin(), sites.end(), site);
    if (it == sites.end())
        throw ValidationError("unknown site '" + site + "'");
    return static_cast<int>(it - sites.begin());
}

void ModelSpec::validate() const {
    if (sites.empty()) throw ValidationError("model has no sites");
    std::set<std::string> seen;
    for (const auto& s : sites)
        if (!seen.insert(s).second)
            throw ValidationError("duplicate site label '" + s + "'");
    for (const auto& [site, expr] : onsite) {
        (void)expr;
        site_index(site);
    }
    for (const auto& b : bonds) {
        if (b.site_a == b.site_b)
            throw ValidationError("bond endpoints must differ, got '" + b.site_a + "'");
        site_index(b.site_a);
        site_index(b.site_b);
    }
}

void Protocol::validate() const {
    if (waypoints.size() < 2)
        throw ValidationError("protocol needs at least two waypoints");
    if (waypoints.front().s != 0.0 || waypoints.back().s != 1.0)
        throw ValidationError("protocol must start at s=0 and end at s=1");
    for (size_t i = 1; i < waypoints.size(); ++i)
        if (!(waypoints[i].s > waypoints[i - 1].s))
            throw ValidationError("waypoint s-values must strictly increase");
    for (const auto& wp : waypoints)
        for (const auto& name : driven)
            if (!wp.params.count(name))
                throw ValidationError("driven parameter '" + name + "' missing at s=" +
                                      std::to_string(wp.s));
}

namespace {

// Segment index whose half-open interval [s_i, s_{i+1}) contains s; the
// final segment is closed at s = 1.
size_t segment_of(const std::vector<Waypoint>& wps, double s) {
    if (s < 0.0 || s > 1.0)
        throw ValidationError("path parameter s=" + std::to_string(s) + " outside [0,1]");
    size_t i = 0;
    while (i + 2 < wps.size() && s >= wps[i + 1].s) ++i;
    return i;
}

} // namespace

ParamMap Protocol::params_at(double s) const {
    size_t i = segment_of(waypoints, s);
    const Waypoint& a = waypoints[i];
    const Waypoint& b = waypoints[i + 1];
    double t = (s - a.s) / (b.s - a.s);
    ParamMap out = a.params;
    for (auto& [name, va] : out) {
        auto it = b.params.find(name);
        if (it == b.params.end()) continue;
        // exact at the right breakpoint, so shared endpoints compare equal
        va = t >= 1.0 ? it->second : va + t * (it->second - va);
    }
    return out;
}

ParamMap Protocol::dparams_at(double s) const {
    size_t i = segment_of(waypoints, s);
    const Waypoint& a = waypoints[i];
    const Waypoint& b = waypoints[i + 1];
    double inv = 1.0 / (b.s - a.s);
    ParamMap out;
    for (const auto& [name, va] : a.params) {
        auto it = b.params.find(name);
        out[name] = it == b.params.end() ? 0.0 : (it->second - va) * inv;
    }
    return out;
}

std::vector<double> Protocol::breakpoints() const {
    std::vector<double> out;
    out.reserve(waypoints.size());
    for (const auto& wp : waypoints) out.push_back(wp.s);
    return out;
}

void Partition::validate(const ModelSpec& spec) const {
    std::set<std::string> label_set(labels.begin(), labels.end());
    if (label_set.size() != labels.size())
        throw ValidationError("duplicate subsystem labels");
    for (const auto& site : spec.sites) {
        auto it = assignment.find(site);
        if (it == assignment.end())
            throw ValidationError("site '" + site + "' has no subsystem label");
        if (!label_set.count(it->second))
            throw ValidationError("site '" + site + "' assigned to unknown label '" +
                                  it->second + "'");
    }
    for (const auto& [site, label] : assignment) {
        (void)label;
        spec.site_index(site);
    }
}

Matrix build_hamiltonian(const ModelSpec& spec, const ParamMap& params) {
    int n = spec.dimension();
    Matrix h = Matrix::Zero(n, n);
    for (const auto& [site, expr] : spec.onsite) {
        int i = spec.site_index(site);
        h(i, i) = resolve(expr, params, "onsite[" + site + "]");
    }
    for (const auto& b : spec.bonds) {
        int i = spec.site_index(b.site_a);
        int j = spec.site_index(b.site_b);
        double w = resolve(b.amplitude, params, "bond " + b.site_a + "-" + b.site_b);
        h(i, j) += w;
        h(j, i) += w;
    }
    return h;
}

Matrix build_drive_derivative(const ModelSpec& spec, const Protocol& protocol, double s) {
    return build_drive_matrix(spec, protocol.dparams_at(s));
}

Matrix build_drive_matrix(const ModelSpec& spec, const ParamMap& rates) {
    int n = spec.dimension();
    Matrix hdot = Matrix::Zero(n, n);
    for (const auto& [site, expr] : spec.onsite) {
        int i = spec.site_index(site);
        hdot(i, i) = resolve_rate(expr, rates);
    }
    for (const auto& b : spec.bonds) {
        int i = spec.site_index(b.site_a);
        int j = spec.site_index(b.site_b);
        double wdot = resolve_rate(b.amplitude, rates);
        hdot(i, j) += wdot;
        hdot(j, i) += wdot;
    }
    return hdot;
}

Matrix projector(const ModelSpec& spec, const Partition& partition, const std::string& gamma) {
    if (std::find(partition.labels.begin(), partition.labels.end(), gamma) ==
        partition.labels.end())
        throw ValidationError("unknown subsystem label '" + gamma + "'");
    int n = spec.dimension();
    Matrix pi = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        auto it = partition.assignment.find(spec.sites[i]);
        if (it != partition.assignment.end() && it->second == gamma) pi(i, i) = 1.0;
    }
    return pi;
}

} // namespace qlever
