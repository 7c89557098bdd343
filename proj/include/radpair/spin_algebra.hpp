// spin_algebra.hpp — dense complex spin matrices, Kronecker embedding, Hermitian eigensolve
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace radpair {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline bool is_half_integer_spin(double s) {
    if (s < 0.0 || !std::isfinite(s)) return false;
    double twos = 2.0 * s;
    return std::abs(twos - std::round(twos)) < 1e-9;
}

// Angular-momentum matrices in the Sz eigenbasis, hbar = 1.
struct SpinTriple {
    Matrix x, y, z;

    Eigen::Index dim() const { return z.rows(); }
    const Matrix& component(int p) const {
        switch (p) {
            case 0: return x;
            case 1: return y;
            default: return z;
        }
    }
};

inline SpinTriple spin_operators(double s) {
    if (!is_half_integer_spin(s)) {
        throw std::invalid_argument("spin_operators: 2s must be a non-negative integer, got s=" +
                                    std::to_string(s));
    }
    const Eigen::Index d = static_cast<Eigen::Index>(std::lround(2.0 * s)) + 1;
    Matrix sz = Matrix::Zero(d, d);
    Matrix sp = Matrix::Zero(d, d);  // raising operator
    for (Eigen::Index i = 0; i < d; ++i) {
        double m = s - static_cast<double>(i);
        sz(i, i) = m;
        if (i + 1 < d) {
            double mlow = m - 1.0;
            sp(i, i + 1) = std::sqrt(s * (s + 1.0) - mlow * (mlow + 1.0));
        }
    }
    SpinTriple t;
    t.x = (sp + sp.adjoint()) / 2.0;
    t.y = (sp - sp.adjoint()) / Complex(0.0, 2.0);
    t.z = sz;
    return t;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// I x ... x op x ... x I with op at position `slot`.
inline Matrix embed(const Matrix& op, std::size_t slot, const std::vector<Eigen::Index>& dims) {
    if (slot >= dims.size()) {
        throw std::out_of_range("embed: slot " + std::to_string(slot) + " out of range for " +
                                std::to_string(dims.size()) + " particles");
    }
    if (op.rows() != op.cols() || op.rows() != dims[slot]) {
        throw std::invalid_argument("embed: operator dimension " + std::to_string(op.rows()) +
                                    " does not match slot dimension " +
                                    std::to_string(dims[slot]));
    }
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i == slot) {
            out = kron(out, op);
        } else {
            out = kron(out, Matrix::Identity(dims[i], dims[i]));
        }
    }
    return out;
}

struct EigenDecomposition {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // columns
};

inline double hermiticity_residual(const Matrix& h) {
    double scale = h.norm();
    if (scale == 0.0) return 0.0;
    return (h - h.adjoint()).norm() / scale;
}

inline EigenDecomposition hermitian_eig(const Matrix& h) {
    if (h.rows() != h.cols()) {
        throw std::invalid_argument("hermitian_eig: matrix must be square");
    }
    if (hermiticity_residual(h) > 1e-10) {
        throw std::invalid_argument("hermitian_eig: matrix is not Hermitian to 1e-10 relative");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eig: eigendecomposition failed");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace radpair
