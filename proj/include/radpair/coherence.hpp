// coherence.hpp — von Neumann entropy and relative entropy of coherence for
// joint or reduced electron states, in a chosen reference basis
#pragma once

#include <radpair/dynamics.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace radpair {

enum class Subsystem { joint, electrons };
enum class Basis { product_z, singlet_triplet };

struct CoherenceOptions {
    Subsystem subsystem = Subsystem::joint;
    Basis basis = Basis::product_z;
    bool renormalize = true;
};

namespace detail {

// -sum lambda ln lambda with 0 ln 0 := 0; lambda in [-1e-8, 0) clamped to 0
// (the bound matches the oracle integrator's allowed positivity drift)
inline double entropy_of_spectrum(const Eigen::ArrayXd& lambda) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        double v = lambda(i);
        if (v < -1e-8) {
            throw std::invalid_argument("entropy: eigenvalue " + std::to_string(v) +
                                        " below -1e-8; state is not positive semidefinite");
        }
        if (v > 0.0) s -= v * std::log(v);
    }
    return s;
}

inline Eigen::ArrayXd spectrum(const Matrix& rho) {
    if (hermiticity_residual(rho) > 1e-10) {
        throw std::invalid_argument("entropy: state is not Hermitian to 1e-10");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().array();
}

}  // namespace detail

// S(rho) = -Tr[rho ln rho]; expects a normalized state (trace 1 to 1e-9).
inline double von_neumann_entropy(const Matrix& rho) {
    double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > 1e-9) {
        throw std::invalid_argument("von_neumann_entropy: trace " + std::to_string(tr) +
                                    " differs from 1 beyond 1e-9; renormalize first");
    }
    return detail::entropy_of_spectrum(detail::spectrum(rho));
}

// Electron-pair reduction: trace out both nuclear registers. Particle order is
// (electron A, nuclei A, electron B, nuclei B); result index is eA*2 + eB.
inline Matrix partial_trace_to_electrons(const Matrix& rho, Eigen::Index na, Eigen::Index nb) {
    const Eigen::Index d = 4 * na * nb;
    if (rho.rows() != d || rho.cols() != d) {
        throw std::invalid_argument("partial_trace_to_electrons: dimension mismatch");
    }
    auto idx = [na, nb](Eigen::Index ea, Eigen::Index ia, Eigen::Index eb, Eigen::Index ib) {
        return ((ea * na + ia) * 2 + eb) * nb + ib;
    };
    Matrix red = Matrix::Zero(4, 4);
    for (Eigen::Index ea = 0; ea < 2; ++ea)
        for (Eigen::Index eb = 0; eb < 2; ++eb)
            for (Eigen::Index fa = 0; fa < 2; ++fa)
                for (Eigen::Index fb = 0; fb < 2; ++fb) {
                    Complex acc = 0.0;
                    for (Eigen::Index ia = 0; ia < na; ++ia)
                        for (Eigen::Index ib = 0; ib < nb; ++ib)
                            acc += rho(idx(ea, ia, eb, ib), idx(fa, ia, fb, ib));
                    red(ea * 2 + eb, fa * 2 + fb) = acc;
                }
    return red;
}

// Electron-pair singlet/triplet basis as columns (S, T+, T0, T-) over the
// product-z order (uu, ud, du, dd).
inline Matrix singlet_triplet_transform_4() {
    const double r = 1.0 / std::sqrt(2.0);
    Matrix t = Matrix::Zero(4, 4);
    t(1, 0) = r;  t(2, 0) = -r;  // S
    t(0, 1) = 1.0;               // T+
    t(1, 2) = r;  t(2, 2) = r;   // T0
    t(3, 3) = 1.0;               // T-
    return t;
}

// Same change of basis lifted to the joint space (nuclear registers untouched).
inline Matrix joint_singlet_triplet_transform(Eigen::Index na, Eigen::Index nb) {
    const Eigen::Index d = 4 * na * nb;
    const Matrix t4 = singlet_triplet_transform_4();
    Matrix w = Matrix::Zero(d, d);
    for (Eigen::Index c = 0; c < 4; ++c) {
        for (Eigen::Index ea = 0; ea < 2; ++ea) {
            for (Eigen::Index eb = 0; eb < 2; ++eb) {
                Complex amp = t4(ea * 2 + eb, c);
                if (amp == 0.0) continue;
                for (Eigen::Index ia = 0; ia < na; ++ia)
                    for (Eigen::Index ib = 0; ib < nb; ++ib)
                        w(((ea * na + ia) * 2 + eb) * nb + ib, (c * na + ia) * nb + ib) = amp;
            }
        }
    }
    return w;
}

// C(rho) = S(rho_diag) - S(rho) in the requested basis, after subsystem
// reduction and (optional) renormalization. With renormalize off the
// entropies are evaluated on the sub-normalized matrix as given.
inline double relative_entropy_of_coherence(const Matrix& rho_in, const CoherenceOptions& opt,
                                            Eigen::Index na = 1, Eigen::Index nb = 1) {
    Matrix rho = opt.subsystem == Subsystem::electrons && rho_in.rows() > 4
                     ? partial_trace_to_electrons(rho_in, na, nb)
                     : rho_in;
    if (opt.renormalize) {
        double tr = rho.trace().real();
        if (tr <= 0.0) {
            throw std::invalid_argument("relative_entropy_of_coherence: non-positive trace");
        }
        rho /= tr;
    }
    if (opt.basis == Basis::singlet_triplet) {
        Matrix w = rho.rows() == 4
                       ? singlet_triplet_transform_4()
                       : joint_singlet_triplet_transform(
                             opt.subsystem == Subsystem::electrons ? 1 : na,
                             opt.subsystem == Subsystem::electrons ? 1 : nb);
        rho = (w.adjoint() * rho * w).eval();
    }
    Eigen::ArrayXd diag = rho.diagonal().real().array();
    double s_diag = detail::entropy_of_spectrum(diag);
    double s_rho = detail::entropy_of_spectrum(detail::spectrum(rho));
    double c = s_diag - s_rho;
    if (c < -1e-10) {
        throw std::runtime_error("relative_entropy_of_coherence: negative value " +
                                 std::to_string(c));
    }
    return c < 0.0 ? 0.0 : c;
}

struct TraceSeries {
    std::vector<double> times;   // seconds, strictly increasing
    std::vector<double> values;  // same length
    std::string config_digest;
    CoherenceOptions options;
    bool truncated = false;  // series stopped early at a vanishing-trace state
};

inline TraceSeries coherence_trace(const PairSystem& sys, const std::vector<double>& times,
                                   const CoherenceOptions& opt = {}) {
    require_equal_rates(sys.config, "coherence_trace");
    TraceSeries out;
    out.config_digest = config_digest(sys.config);
    out.options = opt;
    const Eigen::Index na = sys.a.nuclear_size, nb = sys.b.nuclear_size;
    const double k = sys.config.rates.ks_per_s;
    for (double t : times) {
        if (std::exp(-k * t) < 1e-280) {  // state trace numerically gone
            out.truncated = true;
            break;
        }
        DensityMatrix rho = evolve_joint(sys, t);
        out.times.push_back(t);
        out.values.push_back(relative_entropy_of_coherence(rho.matrix, opt, na, nb));
    }
    return out;
}

inline TraceSeries coherence_trace(const RadicalPairConfig& config,
                                   const std::vector<double>& times,
                                   const CoherenceOptions& opt = {}) {
    return coherence_trace(prepare(config), times, opt);
}

}  // namespace radpair
