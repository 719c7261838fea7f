#include "qlever/thermo.hpp"

#include <cmath>
#include <sstream>

namespace qlever {

double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double fermi(double eps, const Reservoir& res) {
    double x = res.beta() * (eps - res.chemical_potential);
    if (x >= 0.0) {
        double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

double fermi_rate(double eps, double eps_rate, const Reservoir& res) {
    double f = fermi(eps, res);
    return -res.beta() * f * (1.0 - f) * eps_rate;
}

double entropy_kernel(double eps, const Reservoir& res) {
    double x = res.beta() * (eps - res.chemical_potential);
    // s = x f + ln(1 + e^{-x}), equal to -f ln f - (1-f) ln(1-f)
    return x * fermi(eps, res) + softplus(-x);
}

double grand_kernel(double eps, const Reservoir& res) {
    double x = res.beta() * (eps - res.chemical_potential);
    return -res.temperature * softplus(-x);
}

GlobalState global_state(const Vector& energies, const Reservoir& res) {
    GlobalState g;
    for (int i = 0; i < energies.size(); ++i) {
        double e = energies(i);
        double f = fermi(e, res);
        g.U += f * e;
        g.S += entropy_kernel(e, res);
        g.N += f;
        g.Omega += grand_kernel(e, res);
    }
    double resid = g.Omega - (g.U - res.temperature * g.S - res.chemical_potential * g.N);
    if (std::abs(resid) > 1e-10 * std::max(1.0, std::abs(g.U))) {
        std::ostringstream os;
        os << "global_state: Omega - (U - T S - mu N) = " << resid << " exceeds tolerance";
        throw NumericalError(os.str());
    }
    return g;
}

GlobalRates global_rates(const SpectralFrame& frame, const Reservoir& res) {
    GlobalRates r;
    for (int nu = 0; nu < frame.dimension(); ++nu) {
        double e = frame.energies(nu);
        double edot = frame.energy_rates(nu);
        double f = fermi(e, res);
        double fdot = fermi_rate(e, edot, res);
        r.W_ext_rate += f * edot;
        r.TS_rate += (e - res.chemical_potential) * fdot;
        r.N_rate += fdot;
        r.U_rate += f * edot + e * fdot;
    }
    r.Omega_rate = r.W_ext_rate;
    return r;
}

} // namespace qlever
