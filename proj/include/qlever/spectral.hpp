// spectral.hpp — Deterministic Hermitian diagonalization, adiabatic gauge
// tracking, and analytic rates of eigenvalues and subspace probabilities.

#pragma once

#include <vector>

#include "qlever/types.hpp"

namespace qlever {

struct EighResult {
    Vector energies; // ascending
    Matrix vectors;  // column nu = |nu>
};

// Cyclic-Jacobi diagonalization of a Hermitian matrix. Deterministic:
// fixed sweep order, fixed degenerate tie-break (index of the largest
// component), and a standalone gauge where each column's
// largest-magnitude entry is real and positive.
EighResult eigh(const Matrix& h, int max_dim = 64);

struct GaugeAlignResult {
    Matrix vectors;
    // Columns whose overlap with the previous frame fell below 0.1
    // (possible crossing between grid points).
    std::vector<int> weak_overlap;
};

// Multiply each column by a unit phase so <nu_prev|nu> has nonnegative
// real part. Column order (ascending energy) is preserved.
GaugeAlignResult gauge_align(const Matrix& prev_vectors, const Matrix& vectors);

// Everything the thermodynamic modules need at one path point.
struct SpectralFrame {
    double s = 0.0;
    Vector energies;
    Matrix vectors;
    Matrix drive_elems;  // M(nu,mu) = <nu|hdot|mu>
    Vector energy_rates; // diag of drive_elems
    double min_gap = 0.0;
    double h_scale = 0.0; // max |h_ij|, used for tolerance scaling
    std::vector<int> tracking_warnings;

    int dimension() const { return static_cast<int>(energies.size()); }
};

SpectralFrame make_frame(const Matrix& h, const Matrix& hdot, double s = 0.0);

// P_nu(gamma) = <nu|pi_gamma|nu>.
Vector prob_weights(const SpectralFrame& frame, const Matrix& pi_gamma);

// Analytic dP_nu(gamma)/ds from first-order adiabatic perturbation theory.
// Refuses on near-degenerate spectra (min_gap <= 1e-9 * max(1, |h|_max)).
Vector prob_rates(const SpectralFrame& frame, const Matrix& pi_gamma);

double degeneracy_threshold(const SpectralFrame& frame);

} // namespace qlever
