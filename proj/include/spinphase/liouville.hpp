#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spinphase/kernels.hpp"
#include "spinphase/mapping.hpp"
#include "spinphase/spectrum.hpp"
#include "spinphase/types.hpp"

namespace spinphase {

// Matrix acting on flattened phase-space grids. Flat index runs n fastest:
// idx(m, n) = (m + ell) * n_dim + (n + ell), matching PhaseGrid storage
// flattened row by row.
struct Superoperator {
    LatticeDim dim;
    Eigen::MatrixXcd mat;

    int flat(int m, int n) const { return dim.idx(m) * dim.n_dim + dim.idx(n); }
};

inline Eigen::VectorXcd flatten_grid(const PhaseGrid& g) {
    const int n = g.dim.n_dim;
    Eigen::VectorXcd v(n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) v(a * n + b) = g.values(a, b);
    return v;
}

// Generator of phase-space motion: column (r,s) holds the image of the
// commutator [H, G(r,s)] mapped back to the lattice,
//   L(u,v; r,s) = (1/N) Tr[G(u,v)^dag (H G(r,s) - G(r,s) H)].
// Acting on a Wigner grid this produces dW/dt up to the factor -i, so the
// nonzero eigenvalues come in pairs +/- (E_i - E_j).
inline Superoperator build_liouvillian(const OperatorMatrix& h, const KernelCache& cache) {
    h.require_hermitian(1e-10, "build_liouvillian");
    const LatticeDim dim = h.dim;
    require_same_dim(dim, cache.dim(), "build_liouvillian");
    const int n = dim.n_dim;
    Superoperator sup{dim, Eigen::MatrixXcd(n * n, n * n)};
    for (int r = -dim.ell; r <= dim.ell; ++r) {
        for (int s = -dim.ell; s <= dim.ell; ++s) {
            const Eigen::MatrixXcd& g = cache.g(r, s).mat;
            const Eigen::MatrixXcd comm = h.mat * g - g * h.mat;
            const int col = sup.flat(r, s);
            for (int u = -dim.ell; u <= dim.ell; ++u)
                for (int v = -dim.ell; v <= dim.ell; ++v)
                    sup.mat(sup.flat(u, v), col) =
                        (cache.g(u, v).mat.conjugate().cwiseProduct(comm)).sum() / double(n);
        }
    }
    return sup;
}

// Spectral propagation of a pure state: psi(t) = sum_i e^{-i E_i t} <v_i|psi0> |v_i>.
// Time is measured in inverse Kelvin (hbar = 1).
inline StateVector propagate_exact(const StateVector& psi0, const SpectrumResult& spec, double t) {
    require_same_dim(psi0.dim, spec.dim, "propagate_exact");
    psi0.require_normalized();
    Eigen::VectorXcd coeff = spec.eigenvectors.adjoint() * psi0.amps;
    for (int i = 0; i < coeff.size(); ++i)
        coeff(i) *= std::exp(complexd(0.0, -spec.eigenvalues(i) * t));
    StateVector out{psi0.dim, spec.eigenvectors * coeff};
    if (std::abs(out.norm() - 1.0) > 1e-12)
        throw std::runtime_error("propagate_exact: norm drift beyond tolerance");
    return out;
}

struct EvolutionConfig {
    double dt = 0.05;
    int steps = 50;
    double series_order_tolerance = 1e-12;
    int max_order = 40;

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("EvolutionConfig: dt must be positive");
        if (steps < 0) throw std::invalid_argument("EvolutionConfig: steps must be nonnegative");
        if (!(series_order_tolerance > 0.0)) throw std::invalid_argument("EvolutionConfig: bad tolerance");
        if (max_order < 1) throw std::invalid_argument("EvolutionConfig: max_order must be at least 1");
    }
};

// One step advances the flattened grid by the truncated exponential
//   W(t+dt) = sum_p (-i dt L)^p / p! W(t),
// stopping once the newest term's max norm drops below the configured
// tolerance. Each step the result must come back real and normalized
// (tolerance 1e-8); evolution continues from the realized real grid.
inline std::vector<PhaseGrid> propagate_series(const PhaseGrid& w0, const Superoperator& sup,
                                               const EvolutionConfig& cfg) {
    cfg.validate();
    require_same_dim(w0.dim, sup.dim, "propagate_series");
    validate_wigner(w0, 1e-8);
    const int n = w0.dim.n_dim;
    std::vector<PhaseGrid> out;
    out.reserve(cfg.steps + 1);
    out.push_back(w0);

    Eigen::VectorXcd cur = flatten_grid(w0);
    for (int step = 0; step < cfg.steps; ++step) {
        Eigen::VectorXcd acc = cur;
        Eigen::VectorXcd term = cur;
        double prev_norm = term.cwiseAbs().maxCoeff();
        bool converged = false;
        for (int p = 1; p <= cfg.max_order; ++p) {
            term = (complexd(0.0, -cfg.dt) / double(p)) * (sup.mat * term);
            acc += term;
            const double tn = term.cwiseAbs().maxCoeff();
            if (tn < cfg.series_order_tolerance) {
                converged = true;
                break;
            }
            if (tn > 1e3 * prev_norm && tn > 1.0)
                throw std::runtime_error("propagate_series: series diverging, reduce dt");
            prev_norm = tn;
        }
        if (!converged)
            throw std::runtime_error("propagate_series: series did not converge within max_order, reduce dt");

        Eigen::MatrixXcd folded(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) folded(a, b) = acc(a * n + b);
        PhaseGrid g = grid_from_complex(w0.dim, GridKind::wigner, folded, 1e-8);
        if (std::abs(g.sum() - 1.0) > 1e-8)
            throw std::runtime_error("propagate_series: normalization drift beyond tolerance");
        out.push_back(g);
        cur = flatten_grid(g);
    }
    return out;
}

}  // namespace spinphase
