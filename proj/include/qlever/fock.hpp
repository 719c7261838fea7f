// fock.hpp — Exact-diagonalization Fock-space cross-check for the
// free-fermion thermodynamics, plus closed forms for the two-level system.

#pragma once

#include <array>

#include "qlever/types.hpp"

namespace qlever {

// Occupation-number-basis representation of a one-body Hamiltonian.
// Basis states are bit masks over modes; Jordan-Wigner signs follow
// ascending site order.
struct FockSystem {
    int n_modes = 0;
    Matrix hamiltonian;     // 2^n x 2^n
    Vector number_operator; // diagonal, = popcount per basis state
};

FockSystem fock_build(const Matrix& one_body);

// Second-quantize an arbitrary one-body operator with the same sign
// convention as fock_build.
Matrix fock_one_body(const Matrix& one_body);

struct GrandDensity {
    Matrix rho;           // positive Hermitian, trace 1
    Vector probabilities; // eigenvalues of rho (Boltzmann weights)
    double grand_potential = 0.0; // -T ln Z
};

GrandDensity grand_density(const FockSystem& sys, const Reservoir& res);

double fock_expect(const GrandDensity& rho, const Matrix& fock_operator);

// -tr rho ln rho from the Boltzmann weights.
double von_neumann_entropy(const GrandDensity& rho);

// Closed forms for a two-level system:
// eigenvalues eps_-, eps_+ and site-1 probabilities P_-(1), P_+(1).
struct TwoLevelClosedForm {
    double eps_minus, eps_plus;
    double p_minus, p_plus;
};

TwoLevelClosedForm two_level_closed_form(double eps1, double eps2, double w);

} // namespace qlever
