// types.hpp — Shared scalar types, error categories, and the reservoir.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qlever {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;

// Bad configuration or bad input data. CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure or violated internal identity. CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Equilibrium reservoir at fixed temperature and chemical potential.
// Units: hbar = k_B = 1.
struct Reservoir {
    double temperature;
    double chemical_potential;

    Reservoir(double T, double mu) : temperature(T), chemical_potential(mu) {
        if (!(T > 0.0))
            throw ValidationError("reservoir temperature must be > 0, got " + std::to_string(T));
    }

    double beta() const { return 1.0 / temperature; }
};

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace qlever
