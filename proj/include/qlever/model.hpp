// model.hpp — Tight-binding model family, driving protocols, and site partitions.

#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qlever/types.hpp"

namespace qlever {

// A matrix-element expression: either a fixed number or the name of a
// protocol parameter.
using ParamExpr = std::variant<double, std::string>;

using ParamMap = std::map<std::string, double>;

struct Bond {
    std::string site_a;
    std::string site_b;
    ParamExpr amplitude;
};

// A labeled family of one-body Hermitian Hamiltonians h(params).
// Row/column i of the induced matrix corresponds to sites[i].
struct ModelSpec {
    std::vector<std::string> sites;
    std::map<std::string, ParamExpr> onsite;
    std::vector<Bond> bonds;

    int dimension() const { return static_cast<int>(sites.size()); }
    int site_index(const std::string& site) const;
    void validate() const;
};

struct Waypoint {
    double s;
    ParamMap params;
};

// Piecewise-linear path s in [0,1] -> params(s). The derivative is exact
// and piecewise constant; at breakpoints the right-derivative applies
// (left-derivative at s = 1).
struct Protocol {
    std::vector<Waypoint> waypoints;
    std::set<std::string> driven;

    void validate() const;
    ParamMap params_at(double s) const;
    ParamMap dparams_at(double s) const;
    // Breakpoint s-values, including 0 and 1. Quadrature panels are
    // aligned to these so segment kinks never fall inside a panel.
    std::vector<double> breakpoints() const;
};

// Assignment of every site to exactly one subsystem label.
struct Partition {
    std::map<std::string, std::string> assignment;
    std::vector<std::string> labels;

    void validate(const ModelSpec& spec) const;
};

Matrix build_hamiltonian(const ModelSpec& spec, const ParamMap& params);

// dh/ds along the protocol; entries are the exact segment slopes.
Matrix build_drive_derivative(const ModelSpec& spec, const Protocol& protocol, double s);

// dh/ds from explicit parameter slopes.
Matrix build_drive_matrix(const ModelSpec& spec, const ParamMap& rates);

// Diagonal 0/1 projector onto the sites labeled gamma.
Matrix projector(const ModelSpec& spec, const Partition& partition, const std::string& gamma);

} // namespace qlever
