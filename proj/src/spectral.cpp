#include "qlever/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qlever {

namespace {

constexpr int kMaxSweeps = 64;

void check_hermitian(const Matrix& h) {
    double scale = std::max(1.0, max_abs(h));
    double asym = max_abs(Matrix(h - h.adjoint()));
    if (asym > 1e-12 * scale) {
        std::ostringstream os;
        os << "matrix is not Hermitian: max |h - h^dag| = " << asym;
        throw ValidationError(os.str());
    }
}

double offdiag_max(const Matrix& a) {
    double m = 0.0;
    for (int q = 1; q < a.cols(); ++q)
        for (int p = 0; p < q; ++p) m = std::max(m, std::abs(a(p, q)));
    return m;
}

int argmax_abs(const Eigen::VectorXcd& v) {
    int best = 0;
    double bm = std::abs(v(0));
    for (int i = 1; i < v.size(); ++i) {
        double m = std::abs(v(i));
        if (m > bm) {
            bm = m;
            best = i;
        }
    }
    return best;
}

} // namespace

EighResult eigh(const Matrix& h, int max_dim) {
    const int n = static_cast<int>(h.rows());
    if (h.cols() != n) throw ValidationError("eigh: matrix must be square");
    if (n > max_dim)
        throw ValidationError("eigh: dimension " + std::to_string(n) + " exceeds cap " +
                              std::to_string(max_dim));
    check_hermitian(h);

    Matrix a = 0.5 * (h + h.adjoint()); // symmetrize roundoff
    Matrix v = Matrix::Identity(n, n);
    const double scale = std::max(1.0, max_abs(a));
    const double stop = 1e-15 * scale;

    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        if (offdiag_max(a) <= stop) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                Complex apq = a(p, q);
                double mag = std::abs(apq);
                if (mag <= stop) continue;
                double app = a(p, p).real();
                double aqq = a(q, q).real();
                Complex phase = apq / mag; // e^{i phi}
                double tau = (aqq - app) / (2.0 * mag);
                double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                        : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double sn = t * c;
                // Unitary G: G(p,p)=c, G(p,q)=s, G(q,p)=-s e^{-i phi},
                // G(q,q)=c e^{-i phi}; a <- G^dag a G, v <- v G.
                Complex emphi = std::conj(phase);
                for (int r = 0; r < n; ++r) {
                    Complex arp = a(r, p), arq = a(r, q);
                    a(r, p) = c * arp - sn * emphi * arq;
                    a(r, q) = sn * arp + c * emphi * arq;
                }
                for (int r = 0; r < n; ++r) {
                    Complex apr = a(p, r), aqr = a(q, r);
                    a(p, r) = c * apr - sn * phase * aqr;
                    a(q, r) = sn * apr + c * phase * aqr;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int r = 0; r < n; ++r) {
                    Complex vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = c * vrp - sn * emphi * vrq;
                    v(r, q) = sn * vrp + c * emphi * vrq;
                }
            }
        }
    }
    if (sweep == kMaxSweeps && offdiag_max(a) > stop) {
        std::ostringstream os;
        os << "eigh: Jacobi iteration did not converge after " << kMaxSweeps
           << " sweeps, off-diagonal residual " << offdiag_max(a);
        throw NumericalError(os.str());
    }

    Vector eval(n);
    for (int i = 0; i < n; ++i) eval(i) = a(i, i).real();

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return eval(i) < eval(j); });

    // Within a numerically degenerate cluster, order columns by the index
    // of their largest-magnitude component.
    const double deg_tol = 1e-12 * scale;
    for (int lo = 0; lo < n;) {
        int hi = lo + 1;
        while (hi < n && eval(order[hi]) - eval(order[hi - 1]) <= deg_tol) ++hi;
        if (hi - lo > 1)
            std::stable_sort(order.begin() + lo, order.begin() + hi, [&](int i, int j) {
                return argmax_abs(v.col(i)) < argmax_abs(v.col(j));
            });
        lo = hi;
    }

    EighResult out;
    out.energies.resize(n);
    out.vectors.resize(n, n);
    for (int k = 0; k < n; ++k) {
        out.energies(k) = eval(order[k]);
        Eigen::VectorXcd col = v.col(order[k]);
        int im = argmax_abs(col);
        Complex z = col(im);
        if (std::abs(z) > 0.0) col *= std::conj(z) / std::abs(z);
        out.vectors.col(k) = col;
    }
    return out;
}

GaugeAlignResult gauge_align(const Matrix& prev_vectors, const Matrix& vectors) {
    if (prev_vectors.rows() != vectors.rows() || prev_vectors.cols() != vectors.cols())
        throw ValidationError("gauge_align: dimension mismatch");
    GaugeAlignResult out;
    out.vectors = vectors;
    for (int k = 0; k < vectors.cols(); ++k) {
        Complex ovl = prev_vectors.col(k).dot(vectors.col(k)); // <prev|new>
        double mag = std::abs(ovl);
        if (mag < 0.1) out.weak_overlap.push_back(k);
        if (mag > 0.0) out.vectors.col(k) *= std::conj(ovl / mag);
    }
    return out;
}

SpectralFrame make_frame(const Matrix& h, const Matrix& hdot, double s) {
    check_hermitian(hdot);
    EighResult eig = eigh(h);
    SpectralFrame frame;
    frame.s = s;
    frame.energies = eig.energies;
    frame.vectors = eig.vectors;
    frame.drive_elems = eig.vectors.adjoint() * hdot * eig.vectors;
    frame.h_scale = max_abs(h);
    const int n = frame.dimension();
    frame.energy_rates.resize(n);
    for (int i = 0; i < n; ++i) frame.energy_rates(i) = frame.drive_elems(i, i).real();
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 1; i < n; ++i) gap = std::min(gap, frame.energies(i) - frame.energies(i - 1));
    frame.min_gap = (n > 1) ? gap : std::numeric_limits<double>::infinity();
    return frame;
}

Vector prob_weights(const SpectralFrame& frame, const Matrix& pi_gamma) {
    const int n = frame.dimension();
    Vector p(n);
    for (int nu = 0; nu < n; ++nu) {
        Complex val = frame.vectors.col(nu).dot(pi_gamma * frame.vectors.col(nu));
        p(nu) = val.real();
    }
    return p;
}

double degeneracy_threshold(const SpectralFrame& frame) {
    return 1e-9 * std::max(1.0, frame.h_scale);
}

Vector prob_rates(const SpectralFrame& frame, const Matrix& pi_gamma) {
    const int n = frame.dimension();
    if (n > 1 && frame.min_gap <= degeneracy_threshold(frame)) {
        std::ostringstream os;
        os << "prob_rates: spectrum is (near-)degenerate at s=" << frame.s
           << " (min gap " << frame.min_gap << "); refine the grid or check the model";
        throw NumericalError(os.str());
    }
    Matrix pi_eig = frame.vectors.adjoint() * pi_gamma * frame.vectors;
    Vector pdot = Vector::Zero(n);
    for (int nu = 0; nu < n; ++nu) {
        Complex acc = 0.0;
        for (int mu = 0; mu < n; ++mu) {
            if (mu == nu) continue;
            acc += pi_eig(nu, mu) * frame.drive_elems(mu, nu) /
                   (frame.energies(nu) - frame.energies(mu));
        }
        pdot(nu) = 2.0 * acc.real();
    }
    return pdot;
}

} // namespace qlever
