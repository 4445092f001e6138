#pragma once

#include <cmath>
#include <numbers>

#include "spinphase/types.hpp"

namespace spinphase {

// Clock operator U, diagonal in the |u_k> basis: U|u_k> = exp(2 pi i k/N)|u_k>.
inline OperatorMatrix build_clock(LatticeDim dim) {
    OperatorMatrix u = OperatorMatrix::zero(dim);
    for (int k = -dim.ell; k <= dim.ell; ++k)
        u.at(k, k) = std::exp(complexd(0.0, 2.0 * std::numbers::pi * k / dim.n_dim));
    return u;
}

// Shift operator V, cyclic in the |u_k> basis: V|u_k> = |u_{k-1}>, so the wrap
// happens at the bottom (V|u_{-ell}> = |u_{+ell}>). This direction realizes the
// Weyl relation V U = exp(2 pi i/N) U V.
inline OperatorMatrix build_shift(LatticeDim dim) {
    OperatorMatrix v = OperatorMatrix::zero(dim);
    for (int k = -dim.ell; k <= dim.ell; ++k) v.at(dim.wrap(k - 1), k) = 1.0;
    return v;
}

// Symmetrized basis element S(k,l) = N^{-1/2} U^k V^l exp(i pi k l/N).
// The N^2 elements are trace-orthonormal: Tr[S^dag(k,l) S(k',l')] = delta delta.
// U^k V^l is written out elementwise: column b holds exp(2 pi i a k/N) at row
// a = wrap(b - l).
inline OperatorMatrix schwinger_s(LatticeDim dim, int k, int l) {
    dim.require_label(k, "k");
    dim.require_label(l, "l");
    const double pi = std::numbers::pi;
    OperatorMatrix s = OperatorMatrix::zero(dim);
    const complexd front =
        std::exp(complexd(0.0, pi * double(k) * double(l) / dim.n_dim)) / std::sqrt(double(dim.n_dim));
    for (int b = -dim.ell; b <= dim.ell; ++b) {
        const int a = dim.wrap(b - l);
        s.at(a, b) = front * std::exp(complexd(0.0, 2.0 * pi * double(a) * double(k) / dim.n_dim));
    }
    return s;
}

}  // namespace spinphase
