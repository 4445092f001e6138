#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "spinphase/fe8.hpp"
#include "spinphase/liouville.hpp"
#include "test_util.hpp"

using namespace spinphase;
using spinphase::testutil::max_abs_diff;

namespace {
const double pi = std::numbers::pi;
}

TEST_CASE("angular momentum operators obey the su(2) algebra") {
    const LatticeDim dim = LatticeDim::of(21);
    const Eigen::MatrixXcd jz = build_jz(dim).mat;
    const Eigen::MatrixXcd jp = build_jplus(dim).mat;
    const Eigen::MatrixXcd jm = build_jminus(dim).mat;

    CHECK(max_abs_diff(jp * jm - jm * jp, 2.0 * jz) < 1e-12);
    CHECK(max_abs_diff(jz * jp - jp * jz, jp) < 1e-12);
    CHECK(max_abs_diff(jz * jm - jm * jz, Eigen::MatrixXcd(-jm)) < 1e-12);
    CHECK(max_abs_diff(jp.adjoint(), jm) < 1e-12);

    // Ladder ends terminate instead of wrapping around.
    CHECK(jp.col(dim.idx(10)).norm() == 0.0);
    CHECK(jm.col(dim.idx(-10)).norm() == 0.0);

    CHECK(std::abs(build_jz(dim).at(10, 10) - 10.0) < 1e-15);
    // J_+|10,9> = sqrt(20)|10,10>
    CHECK(std::abs(build_jplus(dim).at(10, 9) - std::sqrt(20.0)) < 1e-14);
}

TEST_CASE("hamiltonian matrix elements match the coupling constants") {
    Fe8Params p;  // defaults: zero field
    const OperatorMatrix h = build_hamiltonian(p);

    CHECK(std::abs(h.at(10, 10) - complexd(-27.5)) < 1e-12);
    // The rhombic term couples k to k+2 with strength (E/2) sqrt((j-k)(j+k+1)(j-k-1)(j+k+2)).
    const double want = 0.5 * 0.046 * std::sqrt(38.0 * 20.0);
    CHECK(std::abs(h.at(10, 8) - complexd(want)) < 1e-12);
    CHECK(std::abs(want - 0.634066) < 1e-6);

    // With a parallel field, the diagonal gains the linear Zeeman term.
    Fe8Params pf = p;
    pf.h_par = 0.11;
    const OperatorMatrix hf = build_hamiltonian(pf);
    const double a = 2.0 * 0.671714 * 0.11;
    CHECK(std::abs(a - 0.14777708) < 1e-12);
    for (int k = -10; k <= 10; ++k)
        CHECK(std::abs(hf.at(k, k) - complexd(-0.275 * k * k + a * k)) < 1e-12);

    // Fully general field keeps the operator Hermitian.
    Fe8Params pg = p;
    pg.h_par = 0.03;
    pg.h_perp = 1.7;
    pg.alpha = 0.6;
    CHECK(build_hamiltonian(pg).hermiticity_defect() < 1e-12);
}

TEST_CASE("parameter validation rejects unphysical input") {
    Fe8Params p;
    p.j = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = Fe8Params{};
    p.d_anis = 0.1;
    CHECK_THROWS_AS(build_hamiltonian(p), std::invalid_argument);
    p = Fe8Params{};
    p.d_anis = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = Fe8Params{};
    p.h_perp = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("sharp angle states are orthonormal and label checked") {
    const LatticeDim dim = LatticeDim::of(21);
    const StateVector v0 = sharp_angle_state(dim, 0);
    const StateVector v3 = sharp_angle_state(dim, 3);
    CHECK(std::abs(v0.norm() - 1.0) < 1e-12);
    CHECK(std::abs(v0.amps.dot(v3.amps)) < 1e-12);
    for (int k = -10; k <= 10; ++k)
        CHECK(std::abs(std::abs(v3.at(k)) - 1.0 / std::sqrt(21.0)) < 1e-12);
    CHECK_THROWS_AS(sharp_angle_state(dim, 11), std::invalid_argument);
}

TEST_CASE("doublet combinations are normalized and orthogonal") {
    Fe8Params p;
    p.h_par = 0.11;
    const SpectrumResult spec = diagonalize(build_hamiltonian(p));
    const StateVector sym = doublet_combination(spec, 0, 1, +1);
    const StateVector asym = doublet_combination(spec, 0, 1, -1);
    CHECK(std::abs(sym.norm() - 1.0) < 1e-12);
    CHECK(std::abs(sym.amps.dot(asym.amps)) < 1e-12);
    CHECK_THROWS_AS(doublet_combination(spec, 1, 1, +1), std::invalid_argument);
    CHECK_THROWS_AS(doublet_combination(spec, 0, 1, 2), std::invalid_argument);
}

TEST_CASE("double well potential has the expected shape and anchors") {
    Fe8Params p;
    p.h_par = 0.11;
    const double jj = 110.0;
    const double a = p.zeeman_par();

    CHECK(std::abs(potential(pi / 2, p) - (-p.e_anis * jj)) < 1e-12);
    CHECK(std::abs(potential(pi / 2, p) - (-5.06)) < 1e-12);

    Fe8Params p0;  // zero field
    CHECK(std::abs(potential(0.0, p0) - (-30.25)) < 1e-12);
    CHECK(std::abs(potential(0.0, p0) - potential(pi, p0)) < 1e-12);

    // The parallel field tilts the wells by 2 A sqrt(J(J+1)).
    const double tilt = potential(0.0, p) - potential(pi, p);
    CHECK(std::abs(tilt - (-2.0 * a * std::sqrt(jj))) < 1e-12);
    CHECK(std::abs(tilt - (-3.0998)) < 1e-3);

    CHECK(std::abs(potential(0.7, p) - potential(-0.7, p)) < 1e-15);
    CHECK(potential(0.0, p) < potential(0.3, p));
    CHECK(potential(pi, p) < potential(pi - 0.3, p));
    CHECK(potential(0.0, p) < potential(pi, p));

    CHECK_THROWS_AS(potential(std::numeric_limits<double>::infinity(), p),
                    std::invalid_argument);
}

TEST_CASE("phase space image of the hamiltonian has the right marginals") {
    const LatticeDim dim = LatticeDim::of(21);
    const KernelCache& cache = kernel_cache(dim);

    // Purely axial model: the image is n-independent, D m^2 / N on each row.
    Fe8Params axial;
    axial.e_anis = 0.0;
    const PhaseGrid ga = mapped_hamiltonian(axial, cache);
    for (int m = -10; m <= 10; ++m)
        for (int n = -10; n <= 10; ++n)
            CHECK(std::abs(ga.at(m, n) - (-0.275) * m * m / 21.0) < 1e-10);

    // With the rhombic term the rows acquire structure, but each row still
    // resums to the diagonal matrix element D m^2.
    Fe8Params p;
    const PhaseGrid g = mapped_hamiltonian(p, cache);
    for (int m = -10; m <= 10; ++m) {
        double row = 0.0;
        for (int n = -10; n <= 10; ++n) row += g.at(m, n);
        CHECK(std::abs(row - (-0.275) * m * m) < 1e-10);
    }
    double avg5 = 0.0;
    for (int n = -10; n <= 10; ++n) avg5 += g.at(5, n) / 21.0;
    CHECK(std::abs(avg5 - (-0.275) * 25.0 / 21.0) < 1e-10);

    // The image reconstructs the operator exactly.
    Fe8Params pf;
    pf.h_par = 0.11;
    const OperatorMatrix h = build_hamiltonian(pf);
    const OperatorMatrix back = reconstruct_operator(mapped_hamiltonian(pf, cache), cache);
    CHECK(max_abs_diff(back.mat, h.mat) < 1e-10);

    // Sanity anchor for the simplest operator: J_z maps to m/N.
    const PhaseGrid gz = map_operator(build_jz(dim), cache);
    for (int m = -10; m <= 10; ++m)
        for (int n = -10; n <= 10; ++n)
            CHECK(std::abs(gz.at(m, n) - m / 21.0) < 1e-10);
}
