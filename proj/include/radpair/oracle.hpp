// oracle.hpp — brute-force validator: fixed-step RK4 integration of the
// recombination master equation on the full joint space
#pragma once

#include <radpair/coherence.hpp>
#include <radpair/dynamics.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace radpair {

struct Trajectory {
    std::vector<double> times;
    std::vector<Matrix> states;            // joint-space density matrices
    std::vector<double> singlet_prob;      // Tr[rho Q_S] at each stored time
    std::vector<double> singlet_yield;     // running integral of ks Tr[rho Q_S]
    std::vector<double> triplet_yield;     // running integral of kt Tr[rho Q_T]
    Eigen::Index na = 1, nb = 1;
};

struct OracleLimits {
    Eigen::Index max_dim = 256;  // validator is deliberately small-scale
};

inline double max_abs_eigenvalue(const Matrix& h) {
    EigenDecomposition eig = hermitian_eig(h);
    return std::max(std::abs(eig.eigenvalues(0)),
                    std::abs(eig.eigenvalues(eig.eigenvalues.size() - 1)));
}

inline double oracle_max_stable_dt(const RadicalPairConfig& config) {
    Matrix h = build_joint_hamiltonian(config);
    double scale = std::max({max_abs_eigenvalue(h), config.rates.ks_per_s,
                             config.rates.kt_per_s});
    return 0.05 / scale;
}

// rho' = -i[H, rho] - ks/2 {Q_S, rho} - kt/2 {Q_T, rho}, from rho(0) = Q_S/N.
// Stores every `stride`-th step (plus the final one); the running yield uses
// the per-step trapezoid of k Tr[rho Q].
inline Trajectory integrate_master_equation(const RadicalPairConfig& config, double dt,
                                            double horizon, Eigen::Index stride = 1,
                                            const OracleLimits& limits = {}) {
    validate_config(config);
    if (config.joint_dim() > limits.max_dim) {
        throw std::invalid_argument("oracle: joint dimension " +
                                    std::to_string(config.joint_dim()) + " exceeds cap " +
                                    std::to_string(limits.max_dim));
    }
    Matrix h = build_joint_hamiltonian(config);
    const double max_dt = 0.05 / std::max({max_abs_eigenvalue(h), config.rates.ks_per_s,
                                           config.rates.kt_per_s});
    if (dt > max_dt) {
        throw std::invalid_argument("oracle: dt " + std::to_string(dt) +
                                    " violates stability bound " + std::to_string(max_dt));
    }
    if (stride < 1) stride = 1;

    ProjectorPair proj = singlet_projector(config);
    const double ks = config.rates.ks_per_s, kt = config.rates.kt_per_s;
    const bool equal_rates = config.rates.equal();
    const Complex minus_i(0.0, -1.0);

    // every stage state is Hermitian, so rho H = (H rho)^dag and each
    // commutator/anticommutator needs a single product
    Matrix scratch(h.rows(), h.cols());
    auto rhs = [&](const Matrix& rho, Matrix& out) {
        scratch.noalias() = h * rho;
        out = scratch;
        out -= scratch.adjoint();
        out *= minus_i;
        if (equal_rates) {
            out -= ks * rho;
        } else {
            scratch.noalias() = proj.qs * rho;
            out -= (ks / 2.0) * (scratch + scratch.adjoint());
            scratch.noalias() = proj.qt * rho;
            out -= (kt / 2.0) * (scratch + scratch.adjoint());
        }
    };

    const auto steps = static_cast<long long>(std::ceil(horizon / dt));
    const double hstep = horizon / static_cast<double>(steps);

    Matrix rho = proj.qs / static_cast<double>(config.nuclear_space());
    Matrix k1(rho.rows(), rho.cols()), k2 = k1, k3 = k1, k4 = k1, tmp = k1;

    Trajectory traj;
    traj.na = config.radical_a.nuclear_size();
    traj.nb = config.radical_b.nuclear_size();
    double yield_s = 0.0, yield_t = 0.0;
    double ps_prev = (rho * proj.qs).trace().real();
    double pt_prev = (rho * proj.qt).trace().real();

    auto record = [&](long long step) {
        traj.times.push_back(hstep * static_cast<double>(step));
        traj.states.push_back(rho);
        traj.singlet_prob.push_back(ps_prev);
        traj.singlet_yield.push_back(yield_s);
        traj.triplet_yield.push_back(yield_t);
    };
    record(0);

    for (long long step = 1; step <= steps; ++step) {
        rhs(rho, k1);
        tmp = rho + (hstep / 2.0) * k1;
        rhs(tmp, k2);
        tmp = rho + (hstep / 2.0) * k2;
        rhs(tmp, k3);
        tmp = rho + hstep * k3;
        rhs(tmp, k4);
        rho += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = ((rho + rho.adjoint()) / 2.0).eval();  // re-symmetrize drift

        const double ps = (rho * proj.qs).trace().real();
        const double pt = (rho * proj.qt).trace().real();
        yield_s += ks * hstep * (ps_prev + ps) / 2.0;
        yield_t += kt * hstep * (pt_prev + pt) / 2.0;
        ps_prev = ps;
        pt_prev = pt;
        if (step % stride == 0 || step == steps) record(step);
    }
    return traj;
}

// Same contract as coherence_trace, sourced from integrated states.
inline TraceSeries oracle_coherence(const Trajectory& traj, const CoherenceOptions& opt = {}) {
    TraceSeries out;
    out.options = opt;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        double tr = traj.states[i].trace().real();
        if (tr < 1e-280) {
            out.truncated = true;
            break;
        }
        out.times.push_back(traj.times[i]);
        out.values.push_back(
            relative_entropy_of_coherence(traj.states[i], opt, traj.na, traj.nb));
    }
    return out;
}

}  // namespace radpair
