// partition_thermo.hpp — Probability-weighted subsystem thermodynamics,
// the per-subsystem First Law, and the local density of states.

#pragma once

#include <string>
#include <vector>

#include "qlever/spectral.hpp"
#include "qlever/thermo.hpp"

namespace qlever {

struct SubsystemState {
    std::string gamma;
    double U = 0.0;
    double S = 0.0;
    double N = 0.0;
    double Omega = 0.0;
};

struct SubsystemRates {
    std::string gamma;
    double U_rate = 0.0;
    double TS_rate = 0.0;
    double N_rate = 0.0;
    double Omega_rate = 0.0; // thermodynamic work rate on gamma
};

// State of subsystem gamma: each eigenstate's contribution weighted by
// P_nu(gamma).
SubsystemState subsystem_state(const SpectralFrame& frame, const Vector& p_weights,
                               const std::string& gamma, const Reservoir& res);

// Product-rule rates of the subsystem state sums.
SubsystemRates subsystem_rates(const SpectralFrame& frame, const Vector& p_weights,
                               const Vector& p_rates, const std::string& gamma,
                               const Reservoir& res);

// U_rate - T S_rate - mu N_rate - Omega_rate; ~machine epsilon when the
// inputs are consistent.
double first_law_residual(const SubsystemRates& rates, const Reservoir& res);

// Gaussian-broadened local density of states sampled on a grid.
std::vector<double> ldos(const SpectralFrame& frame, const Matrix& pi_gamma,
                         const std::vector<double>& energy_grid, double sigma);

} // namespace qlever
