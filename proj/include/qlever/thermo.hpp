// thermo.hpp — Grand-canonical scalar kernels and global thermodynamics.
//
// All kernels use the numerically stable softplus branch so they remain
// finite down to T ~ 1e-4 and far tails.

#pragma once

#include "qlever/spectral.hpp"
#include "qlever/types.hpp"

namespace qlever {

// ln(1 + e^x) without overflow.
double softplus(double x);

// Fermi-Dirac occupation f(eps) = 1 / (1 + e^{beta (eps - mu)}).
double fermi(double eps, const Reservoir& res);

// df/ds given deps/ds, via the chain rule: -beta f (1-f) eps_rate.
double fermi_rate(double eps, double eps_rate, const Reservoir& res);

// Per-level entropy s(eps) = -f ln f - (1-f) ln(1-f) >= 0.
double entropy_kernel(double eps, const Reservoir& res);

// Per-level grand potential omega(eps) = -T ln(1 + e^{-beta (eps - mu)}) <= 0.
double grand_kernel(double eps, const Reservoir& res);

struct GlobalState {
    double U = 0.0;
    double S = 0.0;
    double N = 0.0;
    double Omega = 0.0;
};

struct GlobalRates {
    double W_ext_rate = 0.0;
    double Omega_rate = 0.0;
    double U_rate = 0.0;
    double TS_rate = 0.0;
    double N_rate = 0.0;
};

GlobalState global_state(const Vector& energies, const Reservoir& res);
GlobalRates global_rates(const SpectralFrame& frame, const Reservoir& res);

} // namespace qlever
