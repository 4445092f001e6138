#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace spinphase {

// Nome parameters of the bell-shaped smoothing weight: tau = i*a with
// a = 1/(2N), plus the term-magnitude cutoff of the theta series.
struct ThetaNome {
    double a;
    double series_tolerance;

    static ThetaNome for_n(int n_dim, double tol = 1e-15) {
        ThetaNome nome{1.0 / (2.0 * n_dim), tol};
        if (!(nome.a > 0.0 && nome.a < 1.0)) throw std::invalid_argument("ThetaNome: a outside (0,1)");
        if (!(nome.series_tolerance > 0.0)) throw std::invalid_argument("ThetaNome: tolerance <= 0");
        return nome;
    }
};

// Jacobi theta function by truncated series, kind in {2,3,4},
// q = exp(i pi tau) with Im(tau) > 0:
//   theta2(z|tau) = sum_{n>=0} 2 q^{(n+1/2)^2} cos((2n+1)z)
//   theta3(z|tau) = 1 + sum_{n>=1} 2 q^{n^2} cos(2nz)
//   theta4(z|tau) = 1 + sum_{n>=1} 2 (-1)^n q^{n^2} cos(2nz)
// Terms are added in ascending order until one falls below tol in magnitude;
// the fixed order makes repeated evaluations bit-identical. The nome
// exp(-pi/42) of the N=21 lattice needs ~60 terms, far under the cap.
inline std::complex<double> theta(int kind, std::complex<double> z, std::complex<double> tau,
                                  double tol = 1e-15, int max_terms = 500) {
    using cd = std::complex<double>;
    if (kind < 2 || kind > 4) throw std::invalid_argument("theta: kind must be 2, 3 or 4");
    if (!(tau.imag() > 0.0)) throw std::invalid_argument("theta: Im(tau) must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("theta: tolerance must be positive");
    const cd q = std::exp(cd(0.0, std::numbers::pi) * tau);
    if (kind == 2) {
        cd total = 0.0;
        for (int n = 0; n < max_terms; ++n) {
            const cd term = 2.0 * std::pow(q, (n + 0.5) * (n + 0.5)) * std::cos(double(2 * n + 1) * z);
            total += term;
            if (std::abs(term) < tol) return total;
        }
        throw std::runtime_error("theta: series did not converge within the term cap");
    }
    cd total = 1.0;
    for (int n = 1; n < max_terms; ++n) {
        const double sign = (kind == 4 && (n % 2 == 1)) ? -1.0 : 1.0;
        const cd term = 2.0 * sign * std::pow(q, double(n) * double(n)) * std::cos(2.0 * double(n) * z);
        total += term;
        if (std::abs(term) < tol) return total;
    }
    throw std::runtime_error("theta: series did not converge within the term cap");
}

}  // namespace spinphase
