// work.hpp — Partitioned power, nonlocal work, the Work Sum Rule, and the
// mechanical advantage of the quantum lever.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlever/spectral.hpp"
#include "qlever/thermo.hpp"

namespace qlever {

struct SubsystemWork {
    std::string gamma;
    double work_rate = 0.0;         // Omega_rate_gamma
    double partitioned_power = 0.0; // <Hdot|_gamma>
    double nonlocal_rate = 0.0;     // I^W_gamma
};

struct WorkRecord {
    std::vector<SubsystemWork> subsystems;
    double W_ext_rate = 0.0;
    double sum_rule_residual = 0.0; // W_ext_rate - sum_gamma Omega_rate_gamma

    const SubsystemWork& at(const std::string& gamma) const;
};

// <Hdot|_gamma> = sum_nu P_nu f_nu edot_nu
//               + sum_{mu != nu} (f_nu + f_mu)/2 M(nu,mu) <mu|pi|nu>.
double partitioned_power(const SpectralFrame& frame, const Matrix& pi_gamma,
                         const Reservoir& res);

// I^W_gamma = sum_nu Pdot_nu omega_nu - (off-diagonal power term).
double nonlocal_work_rate(const SpectralFrame& frame, const Vector& p_weights,
                          const Vector& p_rates, const Matrix& pi_gamma,
                          const Reservoir& res);

// Assembles all per-subsystem work quantities and enforces the sum-rule,
// conservation, and decomposition identities as post-checks.
WorkRecord work_record(const SpectralFrame& frame,
                       const std::map<std::string, Matrix>& projectors,
                       const std::vector<std::string>& labels, const Reservoir& res);

// eta = W_rate_{gamma_drive} / W_ext_rate; nullopt when |W_ext_rate| is
// below the floor 1e-12 * max(1, |h|_max).
std::optional<double> mechanical_advantage(const WorkRecord& record, double h_scale,
                                           const std::string& gamma_drive);

// Single-particle analog of tr{rho [H, H|_gamma]}; vanishes identically
// in equilibrium.
double commutator_flow(const Matrix& h, const Matrix& pi_gamma, const Reservoir& res);

// Low-temperature perturbative bounds on the lever's mechanical advantage.
double perturbative_eta(double eps1, double eps2, double mu);
double perturbative_eta_multi(double mean_eps_occupied, double delta, double mu);

} // namespace qlever
