#pragma once

#include <cmath>

#include "spinphase/types.hpp"

namespace spinphase {

// Angular-momentum operators for spin j = ell on the N = 2j+1 dimensional
// space, basis |j,k> with k in [-j, j].

inline OperatorMatrix build_jz(LatticeDim dim) {
    OperatorMatrix jz = OperatorMatrix::zero(dim);
    for (int k = -dim.ell; k <= dim.ell; ++k) jz.at(k, k) = double(k);
    return jz;
}

// J_+|j,k> = sqrt((j-k)(j+k+1)) |j,k+1>; the ladder terminates at the top
// (no cyclic wrap: J_+|j,j> = 0).
inline OperatorMatrix build_jplus(LatticeDim dim) {
    const double j = dim.ell;
    OperatorMatrix jp = OperatorMatrix::zero(dim);
    for (int k = -dim.ell; k < dim.ell; ++k)
        jp.at(k + 1, k) = std::sqrt((j - k) * (j + k + 1.0));
    return jp;
}

// J_-|j,k> = sqrt((j+k)(j-k+1)) |j,k-1>; terminates at the bottom.
inline OperatorMatrix build_jminus(LatticeDim dim) {
    const double j = dim.ell;
    OperatorMatrix jm = OperatorMatrix::zero(dim);
    for (int k = -dim.ell + 1; k <= dim.ell; ++k)
        jm.at(k - 1, k) = std::sqrt((j + k) * (j - k + 1.0));
    return jm;
}

}  // namespace spinphase
