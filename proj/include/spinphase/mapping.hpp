#pragma once

#include <cmath>
#include <numbers>
#include <utility>

#include "spinphase/kernels.hpp"
#include "spinphase/types.hpp"

namespace spinphase {

// Phase-space image of an operator: grid(m,n) = (1/N) Tr[G^dag(m,n) O].
// Hermitian input yields a real grid (the stored representation); a complex
// residue above tolerance is rejected rather than silently dropped.
inline PhaseGrid map_operator(const OperatorMatrix& op, const KernelCache& cache) {
    const LatticeDim dim = cache.dim();
    op.require_same_dim(dim, "map_operator");
    Eigen::MatrixXcd out(dim.n_dim, dim.n_dim);
    for (int m = -dim.ell; m <= dim.ell; ++m)
        for (int n = -dim.ell; n <= dim.ell; ++n)
            out(dim.idx(m), dim.idx(n)) =
                cache.g(m, n).mat.conjugate().cwiseProduct(op.mat).sum() / double(dim.n_dim);
    return grid_from_complex(dim, GridKind::generic, out, 1e-10);
}

// Inverse map: O = sum_{m,n} grid(m,n) G(m,n). Together with map_operator this
// is an exact resolution of the identity on operators.
inline OperatorMatrix reconstruct_operator(const PhaseGrid& grid, const KernelCache& cache) {
    const LatticeDim dim = cache.dim();
    if (grid.dim != dim) throw std::invalid_argument("reconstruct_operator: dimension mismatch");
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim.n_dim, dim.n_dim);
    for (int m = -dim.ell; m <= dim.ell; ++m)
        for (int n = -dim.ell; n <= dim.ell; ++n) acc += grid.at(m, n) * cache.g(m, n).mat;
    return {dim, acc};
}

// Wigner function of a pure state, computed from the amplitudes alone:
//   W(m,n) = (1/N) sum_{r,s} exp[2 pi i (mr+ns)/N] g(r,s)
//   g(r,s) = (1/N) sum_k C_k C*_{{k+s}} exp[-2 pi i r (k + s/2)/N]
// with {k+s} reduced cyclically into [-ell, ell]. This route never touches the
// kernel matrices, which makes it an independent check of the trace route.
inline PhaseGrid wigner_from_state(const StateVector& psi) {
    const LatticeDim dim = psi.dim;
    psi.require_normalized();
    const double pi = std::numbers::pi;
    const int n_dim = dim.n_dim;

    Eigen::MatrixXcd gsum(n_dim, n_dim);
    for (int r = -dim.ell; r <= dim.ell; ++r) {
        for (int s = -dim.ell; s <= dim.ell; ++s) {
            complexd acc = 0.0;
            for (int k = -dim.ell; k <= dim.ell; ++k) {
                const int ks = dim.wrap(k + s);
                acc += psi.at(k) * std::conj(psi.at(ks)) *
                       std::exp(complexd(0.0, -2.0 * pi * r * (k + 0.5 * s) / n_dim));
            }
            gsum(dim.idx(r), dim.idx(s)) = acc / double(n_dim);
        }
    }

    Eigen::MatrixXcd w(n_dim, n_dim);
    for (int m = -dim.ell; m <= dim.ell; ++m) {
        for (int n = -dim.ell; n <= dim.ell; ++n) {
            complexd acc = 0.0;
            for (int r = -dim.ell; r <= dim.ell; ++r)
                for (int s = -dim.ell; s <= dim.ell; ++s)
                    acc += std::exp(complexd(0.0, 2.0 * pi * (double(m) * r + double(n) * s) / n_dim)) *
                           gsum(dim.idx(r), dim.idx(s));
            w(dim.idx(m), dim.idx(n)) = acc / double(n_dim);
        }
    }

    PhaseGrid grid = grid_from_complex(dim, GridKind::wigner, w, 1e-10);
    validate_wigner(grid);
    return grid;
}

// Wigner function of a density operator via the trace route,
// W(m,n) = (1/N) Tr[G^dag(m,n) rho]. The input must actually be a density
// operator; each precondition failure is reported by name.
inline PhaseGrid wigner_from_density(const OperatorMatrix& rho, const KernelCache& cache) {
    const LatticeDim dim = cache.dim();
    rho.require_same_dim(dim, "wigner_from_density");
    if (rho.hermiticity_defect() > 1e-10)
        throw std::invalid_argument("wigner_from_density: rho is not Hermitian");
    if (std::abs(rho.mat.trace() - complexd(1.0)) > 1e-10)
        throw std::invalid_argument("wigner_from_density: Tr[rho] != 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.mat, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("wigner_from_density: rho is not positive semidefinite");

    PhaseGrid generic = map_operator(rho, cache);
    PhaseGrid grid{dim, GridKind::wigner, std::move(generic.values)};
    validate_wigner(grid);
    return grid;
}

// Husimi distribution by cyclic convolution with the smoothing weight,
// rescaled by the weight's lattice total so the result sums to 1.
inline PhaseGrid husimi_from_wigner(const PhaseGrid& w, const KernelCache& cache) {
    const LatticeDim dim = cache.dim();
    if (w.dim != dim) throw std::invalid_argument("husimi_from_wigner: dimension mismatch");
    validate_wigner(w);
    const SmoothingKernel& e = cache.smoothing();
    PhaseGrid h = PhaseGrid::zero(dim, GridKind::husimi);
    for (int m = -dim.ell; m <= dim.ell; ++m) {
        for (int n = -dim.ell; n <= dim.ell; ++n) {
            double acc = 0.0;
            for (int mp = -dim.ell; mp <= dim.ell; ++mp)
                for (int np = -dim.ell; np <= dim.ell; ++np)
                    acc += e.at(mp - m, np - n) * w.at(mp, np);
            h.at(m, n) = acc / e.total;
        }
    }
    validate_husimi(h);
    return h;
}

// Marginal distributions: momentum J(m) = sum_n grid(m,n) and angle
// Theta(n) = sum_m grid(m,n); each sums to the grid total.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> marginals(const PhaseGrid& grid) {
    return {grid.values.rowwise().sum(), grid.values.colwise().sum().transpose()};
}

}  // namespace spinphase
