#pragma once

#include <Eigen/Eigenvalues>
#include <stdexcept>

#include "spinphase/types.hpp"

namespace spinphase {

namespace detail {

struct EighResult {
    Eigen::VectorXd values;    // ascending
    Eigen::MatrixXcd vectors;  // column i belongs to values(i), deterministic phase
};

// Dense Hermitian eigensolve on a raw matrix (any square size), with the
// eigenvector phase fixed by rotating each column's largest-magnitude
// component onto the positive real axis. Ties resolve to the lowest index, so
// repeated runs produce identical vectors.
inline EighResult eigh(const Eigen::MatrixXcd& h, double herm_tol = 1e-10) {
    if (h.rows() != h.cols()) throw std::invalid_argument("diagonalize: matrix is not square");
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
        throw std::invalid_argument("diagonalize: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: eigensolver failed to converge");
    EighResult r{solver.eigenvalues(), solver.eigenvectors()};
    for (Eigen::Index c = 0; c < r.vectors.cols(); ++c) {
        Eigen::Index imax = 0;
        r.vectors.col(c).cwiseAbs().maxCoeff(&imax);
        const complexd lead = r.vectors(imax, c);
        if (std::abs(lead) > 0.0) r.vectors.col(c) *= std::conj(lead) / std::abs(lead);
    }
    return r;
}

}  // namespace detail

// Eigendecomposition of a lattice operator. Eigenvalues ascend; every pair
// (lambda_i, v_i) satisfies ||H v - lambda v|| <= 1e-10 ||H|| and the vectors
// are orthonormal to the same tolerance (verified before returning).
struct SpectrumResult {
    LatticeDim dim;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;

    StateVector state(int i) const {
        if (i < 0 || i >= eigenvalues.size())
            throw std::invalid_argument("SpectrumResult: eigenstate index out of range");
        return {dim, eigenvectors.col(i)};
    }
};

inline SpectrumResult diagonalize(const OperatorMatrix& h) {
    detail::EighResult r = detail::eigh(h.mat);
    const double scale = h.mat.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < r.values.size(); ++i) {
        const double resid =
            (h.mat * r.vectors.col(i) - r.values(i) * r.vectors.col(i)).norm();
        if (resid > 1e-10 * std::max(scale, 1.0))
            throw std::runtime_error("diagonalize: residual contract violated");
    }
    const Eigen::MatrixXcd gram =
        r.vectors.adjoint() * r.vectors - Eigen::MatrixXcd::Identity(r.values.size(), r.values.size());
    if (gram.cwiseAbs().maxCoeff() > 1e-10)
        throw std::runtime_error("diagonalize: eigenvectors are not orthonormal");
    return SpectrumResult{h.dim, std::move(r.values), std::move(r.vectors)};
}

}  // namespace spinphase
