#include "qlever/work.hpp"

#include <cmath>
#include <sstream>

namespace qlever {

namespace {

// Off-diagonal part of <Hdot|_gamma>, shared between partitioned_power
// and nonlocal_work_rate so the conservation law cancels to round-off.
Complex offdiag_power_term(const SpectralFrame& frame, const Matrix& pi_gamma,
                           const Reservoir& res) {
    const int n = frame.dimension();
    Matrix pi_eig = frame.vectors.adjoint() * pi_gamma * frame.vectors;
    Complex acc = 0.0;
    for (int nu = 0; nu < n; ++nu) {
        double f_nu = fermi(frame.energies(nu), res);
        for (int mu = 0; mu < n; ++mu) {
            if (mu == nu) continue;
            double f_mu = fermi(frame.energies(mu), res);
            acc += 0.5 * (f_nu + f_mu) * frame.drive_elems(nu, mu) * pi_eig(mu, nu);
        }
    }
    return acc;
}

double check_real(Complex z, double tol, const char* what) {
    if (std::abs(z.imag()) > tol) {
        std::ostringstream os;
        os << what << ": imaginary residue " << z.imag() << " exceeds tolerance " << tol;
        throw NumericalError(os.str());
    }
    return z.real();
}

} // namespace

const SubsystemWork& WorkRecord::at(const std::string& gamma) const {
    for (const auto& sw : subsystems)
        if (sw.gamma == gamma) return sw;
    throw ValidationError("work record has no subsystem '" + gamma + "'");
}

double partitioned_power(const SpectralFrame& frame, const Matrix& pi_gamma,
                         const Reservoir& res) {
    Vector p = prob_weights(frame, pi_gamma);
    double diag = 0.0;
    for (int nu = 0; nu < frame.dimension(); ++nu)
        diag += p(nu) * fermi(frame.energies(nu), res) * frame.energy_rates(nu);
    Complex off = offdiag_power_term(frame, pi_gamma, res);
    double tol = 1e-12 * std::max(1.0, frame.h_scale);
    return diag + check_real(off, tol, "partitioned_power");
}

double nonlocal_work_rate(const SpectralFrame& frame, const Vector& p_weights,
                          const Vector& p_rates, const Matrix& pi_gamma,
                          const Reservoir& res) {
    (void)p_weights;
    double flow = 0.0;
    for (int nu = 0; nu < frame.dimension(); ++nu)
        flow += p_rates(nu) * grand_kernel(frame.energies(nu), res);
    Complex off = offdiag_power_term(frame, pi_gamma, res);
    double tol = 1e-12 * std::max(1.0, frame.h_scale);
    return flow - check_real(off, tol, "nonlocal_work_rate");
}

WorkRecord work_record(const SpectralFrame& frame,
                       const std::map<std::string, Matrix>& projectors,
                       const std::vector<std::string>& labels, const Reservoir& res) {
    WorkRecord rec;
    GlobalRates global = global_rates(frame, res);
    rec.W_ext_rate = global.W_ext_rate;

    double sum_work = 0.0;
    double sum_nonlocal = 0.0;
    for (const auto& gamma : labels) {
        auto it = projectors.find(gamma);
        if (it == projectors.end())
            throw ValidationError("work_record: missing projector for '" + gamma + "'");
        const Matrix& pi = it->second;
        Vector p = prob_weights(frame, pi);
        Vector pdot = prob_rates(frame, pi);

        SubsystemWork sw;
        sw.gamma = gamma;
        sw.partitioned_power = partitioned_power(frame, pi, res);
        sw.nonlocal_rate = nonlocal_work_rate(frame, p, pdot, pi, res);
        sw.work_rate = sw.partitioned_power + sw.nonlocal_rate;
        sum_work += sw.work_rate;
        sum_nonlocal += sw.nonlocal_rate;
        rec.subsystems.push_back(sw);
    }
    rec.sum_rule_residual = rec.W_ext_rate - sum_work;

    double scale = std::max(1.0, std::abs(rec.W_ext_rate));
    scale = std::max(scale, frame.h_scale);
    double tol = 1e-11 * scale;
    if (std::abs(rec.sum_rule_residual) > tol) {
        std::ostringstream os;
        os << "work_record: sum rule violated at s=" << frame.s << ", residual "
           << rec.sum_rule_residual;
        throw NumericalError(os.str());
    }
    if (std::abs(sum_nonlocal) > tol) {
        std::ostringstream os;
        os << "work_record: nonlocal work conservation violated at s=" << frame.s
           << ", sum " << sum_nonlocal;
        throw NumericalError(os.str());
    }
    return rec;
}

std::optional<double> mechanical_advantage(const WorkRecord& record, double h_scale,
                                           const std::string& gamma_drive) {
    double floor = 1e-12 * std::max(1.0, h_scale);
    if (std::abs(record.W_ext_rate) <= floor) return std::nullopt;
    return record.at(gamma_drive).work_rate / record.W_ext_rate;
}

double commutator_flow(const Matrix& h, const Matrix& pi_gamma, const Reservoir& res) {
    Matrix h_gamma = 0.5 * (pi_gamma * h + h * pi_gamma);
    Matrix comm = h * h_gamma - h_gamma * h;
    EighResult eig = eigh(h);
    double acc = 0.0;
    for (int nu = 0; nu < eig.energies.size(); ++nu) {
        Complex val = eig.vectors.col(nu).dot(comm * eig.vectors.col(nu));
        acc += fermi(eig.energies(nu), res) * val.real();
    }
    return acc;
}

double perturbative_eta(double eps1, double eps2, double mu) {
    double delta = eps1 - eps2;
    if (delta == 0.0) throw ValidationError("perturbative_eta: eps1 - eps2 must be nonzero");
    return 2.0 * (mu - eps2) / delta;
}

double perturbative_eta_multi(double mean_eps_occupied, double delta, double mu) {
    if (delta == 0.0)
        throw ValidationError("perturbative_eta_multi: delta must be nonzero");
    return (-2.0 / delta) * (mean_eps_occupied - mu);
}

} // namespace qlever
