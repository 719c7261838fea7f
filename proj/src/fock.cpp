#include "qlever/fock.hpp"

#include <bit>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace qlever {

namespace {

constexpr int kMaxModes = 12;

int jw_sign(unsigned mask, int mode) {
    unsigned below = mask & ((1u << mode) - 1u);
    return (std::popcount(below) & 1) ? -1 : 1;
}

} // namespace

Matrix fock_one_body(const Matrix& one_body) {
    const int n = static_cast<int>(one_body.rows());
    if (n > kMaxModes)
        throw ValidationError("fock_one_body: " + std::to_string(n) + " modes exceeds cap " +
                              std::to_string(kMaxModes));
    const unsigned dim = 1u << n;
    Matrix H = Matrix::Zero(dim, dim);
    for (unsigned mask = 0; mask < dim; ++mask) {
        for (int j = 0; j < n; ++j) {
            if (!(mask & (1u << j))) continue;
            int sj = jw_sign(mask, j);
            unsigned m1 = mask ^ (1u << j);
            for (int i = 0; i < n; ++i) {
                if (one_body(i, j) == Complex(0.0)) continue;
                if (m1 & (1u << i)) continue;
                int si = jw_sign(m1, i);
                unsigned m2 = m1 | (1u << i);
                H(m2, mask) += one_body(i, j) * static_cast<double>(si * sj);
            }
        }
    }
    return H;
}

FockSystem fock_build(const Matrix& one_body) {
    FockSystem sys;
    sys.n_modes = static_cast<int>(one_body.rows());
    sys.hamiltonian = fock_one_body(one_body);
    const unsigned dim = 1u << sys.n_modes;
    sys.number_operator.resize(dim);
    for (unsigned mask = 0; mask < dim; ++mask)
        sys.number_operator(mask) = static_cast<double>(std::popcount(mask));
    return sys;
}

GrandDensity grand_density(const FockSystem& sys, const Reservoir& res) {
    Matrix K = sys.hamiltonian;
    for (int i = 0; i < K.rows(); ++i)
        K(i, i) -= res.chemical_potential * sys.number_operator(i);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(K);
    if (solver.info() != Eigen::Success)
        throw NumericalError("grand_density: Fock-space diagonalization failed");
    const Vector& ev = solver.eigenvalues();
    double emin = ev.minCoeff();
    Vector weights = (-(ev.array() - emin) * res.beta()).exp();
    double z_shifted = weights.sum();
    weights /= z_shifted;
    GrandDensity rho;
    rho.probabilities = weights;
    rho.rho = solver.eigenvectors() * weights.asDiagonal() *
              solver.eigenvectors().adjoint();
    rho.grand_potential = emin - res.temperature * std::log(z_shifted);
    return rho;
}

double fock_expect(const GrandDensity& rho, const Matrix& fock_operator) {
    if (fock_operator.rows() != rho.rho.rows())
        throw ValidationError("fock_expect: operator dimension mismatch");
    return (rho.rho * fock_operator).trace().real();
}

double von_neumann_entropy(const GrandDensity& rho) {
    double s = 0.0;
    for (int i = 0; i < rho.probabilities.size(); ++i) {
        double p = rho.probabilities(i);
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

TwoLevelClosedForm two_level_closed_form(double eps1, double eps2, double w) {
    double delta = eps1 - eps2;
    double mean = 0.5 * (eps1 + eps2);
    double root = std::sqrt(0.25 * delta * delta + w * w);
    TwoLevelClosedForm cf;
    cf.eps_minus = mean - root;
    cf.eps_plus = mean + root;
    if (w == 0.0) {
        // Decoupled sites; ties follow the eigh largest-component order.
        cf.p_minus = (eps1 <= eps2) ? 1.0 : 0.0;
        cf.p_plus = 1.0 - cf.p_minus;
        return cf;
    }
    double d2 = std::sqrt(delta * delta + 4.0 * w * w);
    auto p_of = [&](double sign) {
        double u = delta + sign * d2;
        return 1.0 - 4.0 * w * w / (u * u + 4.0 * w * w);
    };
    cf.p_minus = p_of(-1.0);
    cf.p_plus = p_of(+1.0);
    return cf;
}

} // namespace qlever
