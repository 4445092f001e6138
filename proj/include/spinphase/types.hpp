#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

#include "spinphase/lattice.hpp"

namespace spinphase {

using complexd = std::complex<double>;

// N x N operator on the spin space; rows/columns carry labels k in [-ell, ell],
// stored at k + ell.
struct OperatorMatrix {
    LatticeDim dim;
    Eigen::MatrixXcd mat;

    static OperatorMatrix zero(LatticeDim d) {
        return {d, Eigen::MatrixXcd::Zero(d.n_dim, d.n_dim)};
    }
    static OperatorMatrix identity(LatticeDim d) {
        return {d, Eigen::MatrixXcd::Identity(d.n_dim, d.n_dim)};
    }

    complexd& at(int k_row, int k_col) { return mat(dim.idx(k_row), dim.idx(k_col)); }
    complexd at(int k_row, int k_col) const { return mat(dim.idx(k_row), dim.idx(k_col)); }

    double hermiticity_defect() const { return (mat - mat.adjoint()).cwiseAbs().maxCoeff(); }

    void require_hermitian(double tol, const char* who) const {
        if (hermiticity_defect() > tol)
            throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian (defect " +
                                        std::to_string(hermiticity_defect()) + ")");
    }

    void require_same_dim(const LatticeDim& d, const char* who) const {
        if (dim != d) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
    }
};

// State amplitudes C_k in the |j,k> basis, k in [-ell, ell].
struct StateVector {
    LatticeDim dim;
    Eigen::VectorXcd amps;

    complexd& at(int k) { return amps(dim.idx(k)); }
    complexd at(int k) const { return amps(dim.idx(k)); }

    double norm() const { return amps.norm(); }

    void require_normalized(double tol = 1e-12) const {
        const double defect = std::abs(norm() - 1.0);
        if (defect > tol)
            throw std::invalid_argument("state vector not normalized (|norm - 1| = " +
                                        std::to_string(defect) + ")");
    }
};

enum class GridKind { wigner, husimi, generic };

inline const char* grid_kind_name(GridKind k) {
    switch (k) {
        case GridKind::wigner: return "wigner";
        case GridKind::husimi: return "husimi";
        default: return "generic";
    }
}

inline GridKind grid_kind_from_name(const std::string& s) {
    if (s == "wigner") return GridKind::wigner;
    if (s == "husimi") return GridKind::husimi;
    if (s == "generic") return GridKind::generic;
    throw std::invalid_argument("unknown grid kind: " + s);
}

// Real-valued N x N phase-space grid indexed by (m, n) in [-ell, ell]^2;
// storage (m + ell, n + ell). Wigner grids sum to 1; Husimi grids sum to 1
// and are nonnegative up to tolerance.
struct PhaseGrid {
    LatticeDim dim;
    GridKind kind;
    Eigen::MatrixXd values;

    static PhaseGrid zero(LatticeDim d, GridKind k) {
        return {d, k, Eigen::MatrixXd::Zero(d.n_dim, d.n_dim)};
    }
    static PhaseGrid constant(LatticeDim d, GridKind k, double v) {
        return {d, k, Eigen::MatrixXd::Constant(d.n_dim, d.n_dim, v)};
    }

    double& at(int m, int n) { return values(dim.idx(m), dim.idx(n)); }
    double at(int m, int n) const { return values(dim.idx(m), dim.idx(n)); }

    double sum() const { return values.sum(); }
    double min_value() const { return values.minCoeff(); }
    double max_value() const { return values.maxCoeff(); }
};

// Convert a complex grid whose imaginary part is known to be a numerical
// residue into the real PhaseGrid; rejects residues above tolerance so that
// drift cannot propagate silently into logs and entropies.
inline PhaseGrid grid_from_complex(LatticeDim dim, GridKind kind, const Eigen::MatrixXcd& g,
                                   double imag_tol = 1e-10) {
    const double imax = g.imag().cwiseAbs().maxCoeff();
    if (imax > imag_tol)
        throw std::runtime_error(std::string("grid_from_complex: imaginary residue ") +
                                 std::to_string(imax) + " exceeds tolerance for kind " +
                                 grid_kind_name(kind));
    return {dim, kind, g.real()};
}

inline void validate_wigner(const PhaseGrid& g, double tol = 1e-10) {
    if (g.kind != GridKind::wigner)
        throw std::invalid_argument("expected a wigner grid");
    const double s = g.sum();
    if (std::abs(s - 1.0) > tol)
        throw std::runtime_error("wigner grid sum deviates from 1 by " + std::to_string(s - 1.0));
}

inline void validate_husimi(const PhaseGrid& g, double tol = 1e-10) {
    if (g.kind != GridKind::husimi)
        throw std::invalid_argument("expected a husimi grid");
    const double s = g.sum();
    if (std::abs(s - 1.0) > tol)
        throw std::runtime_error("husimi grid sum deviates from 1 by " + std::to_string(s - 1.0));
    if (g.min_value() < -tol)
        throw std::runtime_error("husimi grid has negative entry " + std::to_string(g.min_value()));
}

}  // namespace spinphase
