#pragma once

#include <cmath>
#include <numbers>

#include "spinphase/mapping.hpp"
#include "spinphase/spectrum.hpp"
#include "spinphase/spin.hpp"
#include "spinphase/types.hpp"

namespace spinphase {

// Giant-spin model parameters for the Fe8 cluster. Energies are in Kelvin,
// fields in Tesla; mu_b_over_kb converts g*mu_B*H into Kelvin.
struct Fe8Params {
    int j = 10;
    double d_anis = -0.275;
    double e_anis = 0.046;
    double h_par = 0.0;
    double h_perp = 0.0;
    double alpha = 0.0;
    double g_factor = 2.0;
    double mu_b_over_kb = 0.671714;

    LatticeDim dim() const { return LatticeDim::of(2 * j + 1); }

    void validate() const {
        if (j <= 0) throw std::invalid_argument("Fe8Params: j must be positive");
        if (!(d_anis < 0.0)) throw std::invalid_argument("Fe8Params: d_anis must be negative (easy axis)");
        for (double v : {d_anis, e_anis, h_par, h_perp, alpha, g_factor, mu_b_over_kb})
            if (!std::isfinite(v)) throw std::invalid_argument("Fe8Params: non-finite parameter");
    }

    double zeeman_par() const { return g_factor * mu_b_over_kb * h_par; }
    double zeeman_perp_cos() const { return g_factor * mu_b_over_kb * std::cos(alpha) * h_perp; }
    double zeeman_perp_sin() const { return g_factor * mu_b_over_kb * std::sin(alpha) * h_perp; }
};

// H = D J_z^2 + (E/2)(J_+^2 + J_-^2) + A J_z + B (J_+ + J_-) + iC (J_+ - J_-)
// with A = g mu_B H_par, B = g mu_B cos(alpha) H_perp, C = g mu_B sin(alpha) H_perp.
// The factor i on the C coupling keeps the sum Hermitian.
inline OperatorMatrix build_hamiltonian(const Fe8Params& p) {
    p.validate();
    const LatticeDim dim = p.dim();
    const Eigen::MatrixXcd jz = build_jz(dim).mat;
    const Eigen::MatrixXcd jp = build_jplus(dim).mat;
    const Eigen::MatrixXcd jm = build_jminus(dim).mat;

    Eigen::MatrixXcd h = p.d_anis * jz * jz + 0.5 * p.e_anis * (jp * jp + jm * jm);
    h += p.zeeman_par() * jz;
    h += p.zeeman_perp_cos() * (jp + jm);
    h += complexd(0.0, 1.0) * p.zeeman_perp_sin() * (jp - jm);
    return {dim, std::move(h)};
}

// Phase-space image of the built Hamiltonian; the operator route is the
// ground truth (no closed-form shortcut).
inline PhaseGrid mapped_hamiltonian(const Fe8Params& p, const KernelCache& cache) {
    return map_operator(build_hamiltonian(p), cache);
}

// Effective double-well potential over the polar angle:
// V(theta) = (D+E) J(J+1) cos^2(theta) - g mu_B H_par sqrt(J(J+1)) cos(theta) - E J(J+1).
inline double potential(double theta, const Fe8Params& p) {
    if (!std::isfinite(theta)) throw std::invalid_argument("potential: non-finite angle");
    const double jj = double(p.j) * (p.j + 1.0);
    const double c = std::cos(theta);
    return (p.d_anis + p.e_anis) * jj * c * c - p.zeeman_par() * std::sqrt(jj) * c -
           p.e_anis * jj;
}

// Angle eigenstate |v_{n0}>: C_k = N^{-1/2} exp(+2 pi i k n0/N), the
// conjugate-DFT column whose angle marginal is a delta at n0.
inline StateVector sharp_angle_state(LatticeDim dim, int n0) {
    dim.require_label(n0, "n0");
    StateVector psi{dim, Eigen::VectorXcd(dim.n_dim)};
    const double w = 2.0 * std::numbers::pi * n0 / dim.n_dim;
    const double scale = 1.0 / std::sqrt(double(dim.n_dim));
    for (int k = -dim.ell; k <= dim.ell; ++k)
        psi.at(k) = scale * std::exp(complexd(0.0, w * k));
    return psi;
}

// Normalized combination (v_i + sign * v_j)/sqrt(2) of two eigenstates.
inline StateVector doublet_combination(const SpectrumResult& spec, int i, int j, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("doublet_combination: sign must be +1 or -1");
    if (i == j) throw std::invalid_argument("doublet_combination: need two distinct eigenstates");
    const StateVector vi = spec.state(i), vj = spec.state(j);
    Eigen::VectorXcd amps = vi.amps + double(sign) * vj.amps;
    const double norm = amps.norm();
    if (norm < 1e-12) throw std::runtime_error("doublet_combination: combination has zero norm");
    StateVector out{spec.dim, amps / norm};
    out.require_normalized();
    return out;
}

}  // namespace spinphase
