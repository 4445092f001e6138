#pragma once

#include <stdexcept>
#include <string>

namespace spinphase {

// Odd-dimensional phase-space lattice: labels run over [-ell, ell] with
// N = 2*ell + 1. Storage order for a label is label + ell.
struct LatticeDim {
    int n_dim;
    int ell;

    static LatticeDim of(int n_dim) {
        if (n_dim < 3 || n_dim % 2 == 0)
            throw std::invalid_argument("LatticeDim: n_dim must be odd and >= 3, got " +
                                        std::to_string(n_dim));
        return LatticeDim{n_dim, (n_dim - 1) / 2};
    }

    int idx(int label) const { return label + ell; }

    bool in_range(int label) const { return label >= -ell && label <= ell; }

    void require_label(int label, const char* name) const {
        if (!in_range(label))
            throw std::invalid_argument(std::string(name) + "=" + std::to_string(label) +
                                        " outside [-" + std::to_string(ell) + ", " +
                                        std::to_string(ell) + "]");
    }

    // Reduce an arbitrary integer into [-ell, ell] modulo N.
    int wrap(int label) const {
        int r = label % n_dim;
        if (r > ell) r -= n_dim;
        if (r < -ell) r += n_dim;
        return r;
    }
};

inline bool operator==(const LatticeDim& a, const LatticeDim& b) { return a.n_dim == b.n_dim; }
inline bool operator!=(const LatticeDim& a, const LatticeDim& b) { return a.n_dim != b.n_dim; }

inline void require_same_dim(const LatticeDim& a, const LatticeDim& b, const char* who) {
    if (a != b) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

}  // namespace spinphase
