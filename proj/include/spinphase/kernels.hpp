#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "spinphase/schwinger.hpp"
#include "spinphase/theta.hpp"
#include "spinphase/types.hpp"

namespace spinphase {

// Extra phase entering the Wigner-kernel sum. The shipped choice is
// identically zero: with the symmetrization phase exp(i pi k l/N) inside
// S(k,l) and the shift direction of build_shift, zero passes the invariance
// and orthogonality checks run at cache construction.
using KernelPhase = double (*)(int k, int l, int n_dim);
inline double zero_phase(int, int, int) { return 0.0; }

// Mod-N invariant Wigner kernel
//   G(m,n) = N^{-1/2} sum_{k,l} S(k,l) exp[i pi phi(k,l;N) - 2 pi i (mk+nl)/N].
// The expression is periodic in m and n with period N, so out-of-range labels
// evaluate to the same matrix up to roundoff; no wrapping is applied here.
inline OperatorMatrix wigner_kernel(LatticeDim dim, int m, int n, KernelPhase phi = zero_phase) {
    const double pi = std::numbers::pi;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim.n_dim, dim.n_dim);
    for (int k = -dim.ell; k <= dim.ell; ++k) {
        for (int l = -dim.ell; l <= dim.ell; ++l) {
            const OperatorMatrix s = schwinger_s(dim, k, l);
            const complexd w = std::exp(
                complexd(0.0, pi * phi(k, l, dim.n_dim) -
                                  2.0 * pi * (double(m) * k + double(n) * l) / dim.n_dim));
            // S(k,l) has one entry per column; add just those.
            for (int b = -dim.ell; b <= dim.ell; ++b) {
                const int a = dim.wrap(b - l);
                acc(dim.idx(a), dim.idx(b)) += w * s.at(a, b);
            }
        }
    }
    return {dim, acc / std::sqrt(double(dim.n_dim))};
}

// Bell-shaped weight K(eta, xi): four crossed products of Jacobi theta
// functions at arguments pi*a*eta, pi*a*xi with tau = i*a, a = 1/(2N), and a
// normalization built from theta values at z = 0 with tau = i*a and 4i*a.
// Real on the lattice; equals 1 at the origin and peaks there.
inline double bell_kernel(LatticeDim dim, int eta, int xi, ThetaNome nome) {
    dim.require_label(eta, "eta");
    dim.require_label(xi, "xi");
    const double a = nome.a;
    const double tol = nome.series_tolerance;
    const double pi = std::numbers::pi;
    const complexd ia(0.0, a), i4a(0.0, 4.0 * a);

    const complexd norm = 2.0 * (theta(3, 0.0, ia, tol) * theta(3, 0.0, i4a, tol) +
                                 theta(4, 0.0, ia, tol) * theta(2, 0.0, i4a, tol));
    const complexd t3e = theta(3, pi * a * eta, ia, tol);
    const complexd t4e = theta(4, pi * a * eta, ia, tol);
    const complexd t3x = theta(3, pi * a * xi, ia, tol);
    const complexd t4x = theta(4, pi * a * xi, ia, tol);

    const complexd val = (t3e * t3x + t3e * t4x * std::exp(complexd(0.0, pi * eta)) +
                          t4e * t3x * std::exp(complexd(0.0, pi * xi)) +
                          t4e * t4x * std::exp(complexd(0.0, pi * (eta + xi + dim.n_dim)))) /
                         norm;
    if (std::abs(val.imag()) > 1e-12)
        throw std::runtime_error("bell_kernel: imaginary residue " + std::to_string(val.imag()));
    return val.real();
}

inline double bell_kernel(LatticeDim dim, int eta, int xi) {
    return bell_kernel(dim, eta, xi, ThetaNome::for_n(dim.n_dim));
}

namespace detail {

// Shared worker for the s-parametrized kernels: the same Fourier sum as the
// Wigner kernel with each S(eta,xi) scaled by K(eta,xi)^{-s}. kgrid is the
// precomputed bell weight on the lattice (storage eta+ell, xi+ell).
inline OperatorMatrix s_kernel_from_grid(LatticeDim dim, double s, int m, int n,
                                         const Eigen::MatrixXd& kgrid, KernelPhase phi) {
    const double pi = std::numbers::pi;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim.n_dim, dim.n_dim);
    for (int eta = -dim.ell; eta <= dim.ell; ++eta) {
        for (int xi = -dim.ell; xi <= dim.ell; ++xi) {
            const double kval = kgrid(dim.idx(eta), dim.idx(xi));
            if (-s < 0.0 && kval < 1e-13)
                throw std::runtime_error("s_kernel: K(eta,xi) ~ 0 makes K^{-s} a pole for s > 0");
            const double weight = std::pow(kval, -s);
            const OperatorMatrix sm = schwinger_s(dim, eta, xi);
            const complexd w =
                weight * std::exp(complexd(0.0, pi * phi(eta, xi, dim.n_dim) -
                                                    2.0 * pi * (double(m) * eta + double(n) * xi) /
                                                        dim.n_dim));
            for (int b = -dim.ell; b <= dim.ell; ++b) {
                const int a = dim.wrap(b - xi);
                acc(dim.idx(a), dim.idx(b)) += w * sm.at(a, b);
            }
        }
    }
    return {dim, acc / std::sqrt(double(dim.n_dim))};
}

inline Eigen::MatrixXd bell_grid(LatticeDim dim) {
    Eigen::MatrixXd kgrid(dim.n_dim, dim.n_dim);
    const ThetaNome nome = ThetaNome::for_n(dim.n_dim);
    for (int eta = -dim.ell; eta <= dim.ell; ++eta)
        for (int xi = -dim.ell; xi <= dim.ell; ++xi)
            kgrid(dim.idx(eta), dim.idx(xi)) = bell_kernel(dim, eta, xi, nome);
    return kgrid;
}

}  // namespace detail

// s-parametrized kernel T^(s)(m,n); s = 0 reproduces the Wigner kernel and
// s = -1 is the Husimi (smoothing) kernel.
inline OperatorMatrix s_kernel(LatticeDim dim, double s, int m, int n,
                               KernelPhase phi = zero_phase) {
    if (std::abs(s) > 1.0) throw std::invalid_argument("s_kernel: |s| must be <= 1");
    dim.require_label(m, "m");
    dim.require_label(n, "n");
    return detail::s_kernel_from_grid(dim, s, m, n, detail::bell_grid(dim), phi);
}

// Translation-invariant smoothing weight E(dm,dn) = Tr[T^(0)(m,n) T^(-1)(m',n')]
// with (dm,dn) = (m'-m, n'-n) taken mod N, plus its lattice total (the Husimi
// rescale constant).
struct SmoothingKernel {
    LatticeDim dim;
    Eigen::MatrixXd values;  // storage (dm + ell, dn + ell)
    double total = 0.0;

    double at(int dm, int dn) const { return values(dim.idx(dim.wrap(dm)), dim.idx(dim.wrap(dn))); }
};

// All N^2 Wigner kernels, all N^2 Husimi kernels, and the smoothing weight for
// one lattice dimension, built once and immutable afterwards. Construction
// validates the contracts that pin the phase choice: Hermiticity, unit trace
// and mod-N invariance of G, Hermiticity and unit trace of T^(-1), and
// base-point independence plus realness of the smoothing weight.
class KernelCache {
  public:
    explicit KernelCache(LatticeDim dim, KernelPhase phi = zero_phase) : dim_(dim) {
        const int n = dim.n_dim;
        g_.reserve(size_t(n) * n);
        tm1_.reserve(size_t(n) * n);
        const Eigen::MatrixXd kgrid = detail::bell_grid(dim);
        for (int m = -dim.ell; m <= dim.ell; ++m) {
            for (int nn = -dim.ell; nn <= dim.ell; ++nn) {
                g_.push_back(wigner_kernel(dim, m, nn, phi));
                tm1_.push_back(detail::s_kernel_from_grid(dim, -1.0, m, nn, kgrid, phi));
            }
        }
        validate(phi);
        build_smoothing();
    }

    LatticeDim dim() const { return dim_; }

    const OperatorMatrix& g(int m, int n) const { return g_[flat(m, n)]; }
    const OperatorMatrix& t_husimi(int m, int n) const { return tm1_[flat(m, n)]; }
    const SmoothingKernel& smoothing() const { return smooth_; }

  private:
    size_t flat(int m, int n) const {
        return size_t(dim_.idx(dim_.wrap(m))) * dim_.n_dim + dim_.idx(dim_.wrap(n));
    }

    void validate(KernelPhase phi) const {
        for (int m = -dim_.ell; m <= dim_.ell; ++m) {
            for (int n = -dim_.ell; n <= dim_.ell; ++n) {
                const OperatorMatrix& gk = g(m, n);
                if (gk.hermiticity_defect() > 1e-12)
                    throw std::runtime_error("KernelCache: G not Hermitian at (" +
                                             std::to_string(m) + "," + std::to_string(n) + ")");
                if (std::abs(gk.mat.trace() - complexd(1.0)) > 1e-12)
                    throw std::runtime_error("KernelCache: Tr[G] != 1 at (" + std::to_string(m) +
                                             "," + std::to_string(n) + ")");
                const OperatorMatrix& tk = t_husimi(m, n);
                if (tk.hermiticity_defect() > 1e-10)
                    throw std::runtime_error("KernelCache: T^(-1) not Hermitian at (" +
                                             std::to_string(m) + "," + std::to_string(n) + ")");
                if (std::abs(tk.mat.trace() - complexd(1.0)) > 1e-10)
                    throw std::runtime_error("KernelCache: Tr[T^(-1)] != 1 at (" +
                                             std::to_string(m) + "," + std::to_string(n) + ")");
            }
        }
        // Mod-N invariance at sample points; failure means the phase choice is wrong.
        for (const auto& [m, n] : {std::pair{0, 0}, std::pair{1, -1}, std::pair{-dim_.ell, dim_.ell}}) {
            const OperatorMatrix shifted_m = wigner_kernel(dim_, m + dim_.n_dim, n, phi);
            const OperatorMatrix shifted_n = wigner_kernel(dim_, m, n - dim_.n_dim, phi);
            if ((shifted_m.mat - g(m, n).mat).cwiseAbs().maxCoeff() > 1e-12 ||
                (shifted_n.mat - g(m, n).mat).cwiseAbs().maxCoeff() > 1e-12)
                throw std::runtime_error("KernelCache: mod-N invariance check failed");
        }
    }

    void build_smoothing() {
        const int n = dim_.n_dim;
        Eigen::MatrixXcd from_origin(n, n), from_other(n, n);
        const int bm = 1, bn = -1;  // second base point
        for (int dm = -dim_.ell; dm <= dim_.ell; ++dm) {
            for (int dn = -dim_.ell; dn <= dim_.ell; ++dn) {
                from_origin(dim_.idx(dm), dim_.idx(dn)) =
                    (g(0, 0).mat * t_husimi(dm, dn).mat).trace();
                from_other(dim_.idx(dm), dim_.idx(dn)) =
                    (g(bm, bn).mat * t_husimi(bm + dm, bn + dn).mat).trace();
            }
        }
        if ((from_origin - from_other).cwiseAbs().maxCoeff() > 1e-10)
            throw std::runtime_error("KernelCache: smoothing weight depends on the base point");
        if (from_origin.imag().cwiseAbs().maxCoeff() > 1e-10)
            throw std::runtime_error("KernelCache: smoothing weight has an imaginary residue");
        smooth_ = SmoothingKernel{dim_, from_origin.real(), from_origin.real().sum()};
    }

    LatticeDim dim_;
    std::vector<OperatorMatrix> g_, tm1_;
    SmoothingKernel smooth_;
};

// Standalone builder for the smoothing weight.
inline SmoothingKernel smoothing_kernel(LatticeDim dim) { return KernelCache(dim).smoothing(); }

// Process-wide cache registry: kernels for a given dimension are built once
// and shared; entries are immutable after construction.
inline const KernelCache& kernel_cache(LatticeDim dim) {
    static std::mutex guard;
    static std::map<int, std::unique_ptr<KernelCache>> caches;
    std::lock_guard<std::mutex> lock(guard);
    auto it = caches.find(dim.n_dim);
    if (it == caches.end())
        it = caches.emplace(dim.n_dim, std::make_unique<KernelCache>(dim)).first;
    return *it->second;
}

}  // namespace spinphase
