#include "qlever/partition_thermo.hpp"

#include <cmath>

namespace qlever {

SubsystemState subsystem_state(const SpectralFrame& frame, const Vector& p_weights,
                               const std::string& gamma, const Reservoir& res) {
    if (p_weights.size() != frame.dimension())
        throw ValidationError("subsystem_state: weight vector size mismatch");
    SubsystemState st;
    st.gamma = gamma;
    for (int nu = 0; nu < frame.dimension(); ++nu) {
        double p = p_weights(nu);
        double e = frame.energies(nu);
        double f = fermi(e, res);
        st.U += p * f * e;
        st.S += p * entropy_kernel(e, res);
        st.N += p * f;
        st.Omega += p * grand_kernel(e, res);
    }
    return st;
}

SubsystemRates subsystem_rates(const SpectralFrame& frame, const Vector& p_weights,
                               const Vector& p_rates, const std::string& gamma,
                               const Reservoir& res) {
    if (p_weights.size() != frame.dimension() || p_rates.size() != frame.dimension())
        throw ValidationError("subsystem_rates: vector size mismatch");
    SubsystemRates r;
    r.gamma = gamma;
    const double T = res.temperature;
    const double mu = res.chemical_potential;
    for (int nu = 0; nu < frame.dimension(); ++nu) {
        double p = p_weights(nu);
        double pdot = p_rates(nu);
        double e = frame.energies(nu);
        double edot = frame.energy_rates(nu);
        double f = fermi(e, res);
        double fdot = fermi_rate(e, edot, res);
        r.U_rate += pdot * f * e + p * (fdot * e + f * edot);
        r.TS_rate += T * pdot * entropy_kernel(e, res) + p * (e - mu) * fdot;
        r.N_rate += pdot * f + p * fdot;
        r.Omega_rate += pdot * grand_kernel(e, res) + p * f * edot;
    }
    return r;
}

double first_law_residual(const SubsystemRates& rates, const Reservoir& res) {
    return rates.U_rate - rates.TS_rate - res.chemical_potential * rates.N_rate -
           rates.Omega_rate;
}

std::vector<double> ldos(const SpectralFrame& frame, const Matrix& pi_gamma,
                         const std::vector<double>& energy_grid, double sigma) {
    if (!(sigma > 0.0)) throw ValidationError("ldos: broadening sigma must be > 0");
    Vector p = prob_weights(frame, pi_gamma);
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * M_PI));
    std::vector<double> g(energy_grid.size(), 0.0);
    for (size_t i = 0; i < energy_grid.size(); ++i) {
        for (int nu = 0; nu < frame.dimension(); ++nu) {
            double x = (energy_grid[i] - frame.energies(nu)) / sigma;
            g[i] += p(nu) * norm * std::exp(-0.5 * x * x);
        }
    }
    return g;
}

} // namespace qlever
