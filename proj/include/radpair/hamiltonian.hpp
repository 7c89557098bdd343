// hamiltonian.hpp — per-radical and joint Hamiltonians in angular-frequency units (rad/s)
#pragma once

#include <radpair/config.hpp>
#include <radpair/spin_algebra.hpp>

#include <cmath>
#include <vector>

namespace radpair {

// Free-electron gyromagnetic ratio, rad s^-1 T^-1 (g ~ 2.0023). The only
// place where magnetic-field units enter the library.
inline constexpr double kGammaE = 1.760859627e11;

inline double larmor_rad_per_s(double b_uT) { return kGammaE * b_uT * 1e-6; }
inline double hyperfine_rad_per_s(double a_mT) { return kGammaE * a_mT * 1e-3; }

struct RadicalHamiltonian {
    Matrix matrix;                    // Hermitian, dim = 2 * prod(2s_j + 1)
    SpinTriple electron_spin;         // embedded in the radical space
    std::vector<Eigen::Index> dims;   // electron first, nuclei in config order
};

inline RadicalHamiltonian build_radical_hamiltonian(const RadicalSpec& radical,
                                                    const FieldConfig& field,
                                                    const DimensionCaps& caps = {}) {
    if (radical.dim() > caps.per_radical) {
        throw ConfigError("radical '" + radical.label + "': dimension " +
                          std::to_string(radical.dim()) + " exceeds cap " +
                          std::to_string(caps.per_radical));
    }
    RadicalHamiltonian out;
    out.dims.push_back(2);
    for (const auto& n : radical.nuclei) out.dims.push_back(n.dim());

    const SpinTriple half = spin_operators(0.5);
    out.electron_spin.x = embed(half.x, 0, out.dims);
    out.electron_spin.y = embed(half.y, 0, out.dims);
    out.electron_spin.z = embed(half.z, 0, out.dims);

    const double w0B = larmor_rad_per_s(field.b_uT);
    const double st = std::sin(field.theta_rad), ct = std::cos(field.theta_rad);
    const double cp = std::cos(field.phi_rad), sp = std::sin(field.phi_rad);

    Matrix h = w0B * (st * cp * out.electron_spin.x + st * sp * out.electron_spin.y +
                      ct * out.electron_spin.z);
    for (std::size_t j = 0; j < radical.nuclei.size(); ++j) {
        const auto& nuc = radical.nuclei[j];
        const SpinTriple nspin = spin_operators(nuc.spin);
        for (int p = 0; p < 3; ++p) {
            double a = hyperfine_rad_per_s(nuc.hyperfine.component_mT(p));
            if (a == 0.0) continue;
            h += a * (out.electron_spin.component(p) * embed(nspin.component(p), j + 1, out.dims));
        }
    }
    out.matrix = std::move(h);
    return out;
}

// H_A x I_B + I_A x H_B on the ordered space (radical A particles, then B particles).
inline Matrix build_joint_hamiltonian(const RadicalPairConfig& config,
                                      const DimensionCaps& caps = {}) {
    if (config.joint_dim() > caps.joint) {
        throw ConfigError("joint dimension " + std::to_string(config.joint_dim()) +
                          " exceeds cap " + std::to_string(caps.joint));
    }
    RadicalHamiltonian ha = build_radical_hamiltonian(config.radical_a, config.field, caps);
    RadicalHamiltonian hb = build_radical_hamiltonian(config.radical_b, config.field, caps);
    const Eigen::Index da = ha.matrix.rows(), db = hb.matrix.rows();
    return kron(ha.matrix, Matrix::Identity(db, db)) +
           kron(Matrix::Identity(da, da), hb.matrix);
}

}  // namespace radpair
