// dynamics.hpp — eigenbasis time evolution: correlation tensors, singlet
// probability and joint density matrices for a radical pair with equal rates
#pragma once

#include <radpair/config.hpp>
#include <radpair/hamiltonian.hpp>
#include <radpair/spin_algebra.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace radpair {

// One diagonalized radical: eigenfrequencies plus the electron spin matrices
// rotated into the eigenbasis. Immutable after construction.
struct EigenSystem {
    RealVector omega;          // eigenvalues, rad/s, ascending
    SpinTriple spin_eig;       // V^dag S_p V
    Matrix eigenvectors;       // V
    Eigen::Index dim = 0;
    Eigen::Index nuclear_size = 1;

    double max_gap() const { return omega(omega.size() - 1) - omega(0); }
};

inline EigenSystem diagonalize_radical(const RadicalSpec& radical, const FieldConfig& field,
                                       const DimensionCaps& caps = {}) {
    RadicalHamiltonian h = build_radical_hamiltonian(radical, field, caps);
    EigenDecomposition eig = hermitian_eig(h.matrix);
    EigenSystem out;
    out.omega = std::move(eig.eigenvalues);
    const Matrix& v = eig.eigenvectors;
    out.spin_eig.x = v.adjoint() * h.electron_spin.x * v;
    out.spin_eig.y = v.adjoint() * h.electron_spin.y * v;
    out.spin_eig.z = v.adjoint() * h.electron_spin.z * v;
    out.eigenvectors = v;
    out.dim = h.matrix.rows();
    out.nuclear_size = out.dim / 2;
    return out;
}

// Both radicals diagonalized once for a fixed (config, theta, phi); shared by
// every time evaluation.
struct PairSystem {
    RadicalPairConfig config;
    EigenSystem a, b;

    Eigen::Index joint_dim() const { return a.dim * b.dim; }
    Eigen::Index nuclear_space() const { return a.nuclear_size * b.nuclear_size; }
    double max_delta_omega() const { return a.max_gap() + b.max_gap(); }
};

inline PairSystem prepare(const RadicalPairConfig& config, const DimensionCaps& caps = {}) {
    validate_config(config, caps);
    PairSystem s;
    s.config = config;
    s.a = diagonalize_radical(config.radical_a, config.field, caps);
    s.b = diagonalize_radical(config.radical_b, config.field, caps);
    return s;
}

struct DensityMatrix {
    Matrix matrix;
    double time = 0.0;
};

struct ProjectorPair {
    Matrix qs, qt;
};

// Q_S = I/4 - sum_p S_Ap x S_Bp on the joint space; Q_T = I - Q_S.
inline ProjectorPair singlet_projector(const RadicalPairConfig& config,
                                       const DimensionCaps& caps = {}) {
    RadicalHamiltonian ha = build_radical_hamiltonian(config.radical_a, config.field, caps);
    RadicalHamiltonian hb = build_radical_hamiltonian(config.radical_b, config.field, caps);
    if (config.joint_dim() > caps.joint) {
        throw ConfigError("joint dimension exceeds cap");
    }
    const Eigen::Index d = config.joint_dim();
    Matrix qs = 0.25 * Matrix::Identity(d, d);
    for (int p = 0; p < 3; ++p) {
        qs -= kron(ha.electron_spin.component(p), hb.electron_spin.component(p));
    }
    return {qs, Matrix::Identity(d, d) - qs};
}

// Heisenberg-evolved electron spin in the lab basis:
//   S_p(t) = V (S~_p .* exp(-i (w_m - w_n) t)) V^dag
inline Matrix evolved_spin(const EigenSystem& sys, int p, double t) {
    const Eigen::Index d = sys.dim;
    Eigen::VectorXcd phase(d);
    for (Eigen::Index m = 0; m < d; ++m) {
        phase(m) = std::polar(1.0, -sys.omega(m) * t);
    }
    Matrix w = phase.asDiagonal() * sys.spin_eig.component(p) *
               phase.conjugate().asDiagonal();
    return sys.eigenvectors * w * sys.eigenvectors.adjoint();
}

// R_pq(t) = sum_mn (S_p)_mn (S_q)_nm exp(i (w_m - w_n) t); real for Hermitian S.
inline Eigen::Matrix3cd correlation_tensor(const EigenSystem& sys, double t) {
    if (t < 0.0) throw std::invalid_argument("correlation_tensor: t must be >= 0");
    const Eigen::Index d = sys.dim;
    Eigen::VectorXcd phase(d);
    for (Eigen::Index m = 0; m < d; ++m) {
        phase(m) = std::polar(1.0, sys.omega(m) * t);
    }
    Eigen::Matrix3cd r;
    for (int p = 0; p < 3; ++p) {
        // W_q = diag(phase) S~_q diag(conj(phase)) so that Tr[S~_p W_q] carries
        // the e^{i(w_m - w_n) t} factors
        const Matrix& sp = sys.spin_eig.component(p);
        for (int q = 0; q < 3; ++q) {
            const Matrix& sq = sys.spin_eig.component(q);
            Complex acc = 0.0;
            for (Eigen::Index n = 0; n < d; ++n) {
                for (Eigen::Index m = 0; m < d; ++m) {
                    acc += sp(m, n) * sq(n, m) * phase(m) * std::conj(phase(n));
                }
            }
            r(p, q) = acc;
        }
    }
    return r;
}

inline void require_equal_rates(const RadicalPairConfig& config, const char* where) {
    if (!config.rates.equal()) {
        throw std::invalid_argument(std::string(where) +
                                    ": requires ks == kt; for unequal rates use the "
                                    "master-equation oracle (integrate_master_equation)");
    }
}

// rho_S(t) = 1/4 + (1/N) Re sum_pq R_Apq R_Bpq, optionally times e^{-kt}.
inline double singlet_probability(const PairSystem& sys, double t, bool include_decay = false) {
    require_equal_rates(sys.config, "singlet_probability");
    Eigen::Matrix3cd ra = correlation_tensor(sys.a, t);
    Eigen::Matrix3cd rb = correlation_tensor(sys.b, t);
    Complex acc = (ra.array() * rb.array()).sum();
    double value = 0.25 + acc.real() / static_cast<double>(sys.nuclear_space());
    if (include_decay) value *= std::exp(-sys.config.rates.ks_per_s * t);
    return value;
}

inline double singlet_probability(const RadicalPairConfig& config, double t,
                                  bool include_decay = false) {
    return singlet_probability(prepare(config), t, include_decay);
}

// Factorized evolution: the joint state assembled from
// per-radical Heisenberg spins. Production path for coherence traces.
inline DensityMatrix evolve_joint(const PairSystem& sys, double t) {
    require_equal_rates(sys.config, "evolve_joint");
    const double n = static_cast<double>(sys.nuclear_space());
    const Eigen::Index d = sys.joint_dim();
    Matrix rho = Matrix::Identity(d, d) / (4.0 * n);
    for (int p = 0; p < 3; ++p) {
        rho -= kron(evolved_spin(sys.a, p, t), evolved_spin(sys.b, p, t)) / n;
    }
    rho *= std::exp(-sys.config.rates.ks_per_s * t);
    return {std::move(rho), t};
}

// Direct form e^{-iHt} (Q_S/N) e^{iHt} e^{-kt} via the joint eigenbasis.
// Independent of the factorized path; used for cross-validation.
inline DensityMatrix evolve_joint_direct(const RadicalPairConfig& config, double t,
                                         const DimensionCaps& caps = {}) {
    require_equal_rates(config, "evolve_joint_direct");
    Matrix h = build_joint_hamiltonian(config, caps);
    EigenDecomposition eig = hermitian_eig(h);
    const Eigen::Index d = h.rows();
    Matrix rho0 = singlet_projector(config, caps).qs /
                  static_cast<double>(config.nuclear_space());
    Eigen::VectorXcd phase(d);
    for (Eigen::Index m = 0; m < d; ++m) {
        phase(m) = std::polar(1.0, -eig.eigenvalues(m) * t);
    }
    Matrix rho_eig = eig.eigenvectors.adjoint() * rho0 * eig.eigenvectors;
    rho_eig = phase.asDiagonal() * rho_eig * phase.conjugate().asDiagonal();
    Matrix rho = eig.eigenvectors * rho_eig * eig.eigenvectors.adjoint();
    rho *= std::exp(-config.rates.ks_per_s * t);
    return {std::move(rho), t};
}

}  // namespace radpair
