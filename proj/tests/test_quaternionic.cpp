#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "z2index/spectra.hpp"

using namespace z2;

namespace {

AntiUnitary random_tau(std::mt19937_64& rng, Index k) {
    Mat U = oracle::random_unitary(rng, 2 * k);
    return AntiUnitary(Mat(U * oracle::standard_J(k) * U.transpose()));
}

}  // namespace

TEST_CASE("standard J squares to -1 and is unitary antisymmetric") {
    for (Index k : {1, 2, 5}) {
        AntiUnitary t = make_standard_J(k);
        CHECK(t.dim() == 2 * k);
        CHECK(t.unitarityResidual() < 1e-14);
        CHECK(t.antisymmetryResidual() == 0.0);
        Mat J = t.denseJ();
        CHECK((J * J.conjugate() + Mat::Identity(2 * k, 2 * k)).norm() < 1e-14);
    }
}

TEST_CASE("tau^2 = -1 on 100 random vectors for randomized J") {
    std::mt19937_64 rng(1);
    AntiUnitary t = random_tau(rng, 4);
    for (int i = 0; i < 100; ++i) {
        Vec v = oracle::random_complex(rng, 8, 1);
        Vec w = apply_tau(t, apply_tau(t, v));
        CHECK((w + v).norm() < 1e-12 * v.norm());
    }
}

TEST_CASE("tau* = -tau: <tau x, y> = -<tau y, x> conjugated") {
    std::mt19937_64 rng(2);
    AntiUnitary t = random_tau(rng, 3);
    for (int i = 0; i < 20; ++i) {
        Vec x = oracle::random_complex(rng, 6, 1), y = oracle::random_complex(rng, 6, 1);
        const cplx a = apply_tau(t, x).dot(y), b = apply_tau(t, y).dot(x);
        CHECK(std::abs(a + b) < 1e-12);
    }
}

TEST_CASE("AntiUnitary rejects odd dimension and non-unitary J") {
    CHECK_THROWS_AS(AntiUnitary(Mat(Mat::Identity(3, 3))), DimensionMismatch);
    Mat J = 2.0 * oracle::standard_J(1);
    CHECK_THROWS_AS(AntiUnitary{J}, SymmetryViolation);
    CHECK_THROWS_AS(checked_even(0), DimensionMismatch);
    CHECK(checked_even(4) == 4);
}

TEST_CASE("symmetrize_odd: output is odd symmetric and idempotent") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 25; ++trial) {
        const Index k = 1 + trial % 7;
        AntiUnitary t = random_tau(rng, k);
        Mat A = oracle::random_complex(rng, 2 * k, 2 * k);
        Mat D = symmetrize_odd(A, t);
        CHECK(check_odd_symmetric(D, t) < 1e-13);
        CHECK((symmetrize_odd(D, t) - D).norm() < 1e-12 * D.norm());
        // sparse path agrees with the dense one
        CHECK((to_dense(symmetrize_odd(to_sparse(A), t)) - D).norm() < 1e-12 * D.norm());
    }
    // a random matrix is not odd symmetric
    AntiUnitary t = make_standard_J(2);
    CHECK(check_odd_symmetric(Mat(oracle::random_complex(rng, 4, 4)), t) > 1e-3);
}

TEST_CASE("odd symmetric matrices have even-dimensional kernels (D J is antisymmetric)") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const Index k = 2 + trial % 5, n = 2 * k;
        AntiUnitary t = random_tau(rng, k);
        const Index rank = 1 + trial % (n - 1);
        Mat A = oracle::random_complex(rng, n, rank) * oracle::random_complex(rng, rank, n);
        Mat D = symmetrize_odd(A, t);
        const int ker = oracle::kernel_count(D, 1e-10);
        CHECK(ker % 2 == 0);
        SpectralReport r = kernel_dimension(D, KernelPolicy::exact());
        CHECK(r.kernelDim == ker);
        CHECK(z2_index(r) == 0);
    }
}

TEST_CASE("Kramers: library clusters agree with an independent eigen oracle") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Index k = 1 + trial % 10;
        AntiUnitary t = random_tau(rng, k);
        Mat A = oracle::random_complex(rng, 2 * k, 2 * k);
        Mat D = symmetrize_odd(A, t);
        KramersCertificate c = kramers_multiplicity_check(D, t, KramersMode::SquaredOffDiagonal, 1e-8);
        CHECK(c.allEven);
        for (int m : oracle::nonzero_multiplicities(D.adjoint() * D, 1e-8, 1e-12)) CHECK(m % 2 == 0);

        Mat H = 0.5 * (A + A.adjoint());
        Mat J = t.denseJ();
        H = 0.5 * (H + J * H.conjugate() * J.adjoint());
        KramersCertificate h = kramers_multiplicity_check(H, t, KramersMode::Commuting, 1e-8);
        CHECK(h.allEven);
        int total = 0;
        for (const auto& cl : h.clusters) total += cl.multiplicity;
        CHECK(total == 2 * k);
        for (int m : oracle::nonzero_multiplicities(H, 1e-8)) CHECK(m % 2 == 0);
    }
}

TEST_CASE("Kramers check refuses matrices that break the symmetry") {
    std::mt19937_64 rng(6);
    AntiUnitary t = make_standard_J(2);
    Mat A = oracle::random_complex(rng, 4, 4);
    Mat H = A + A.adjoint();
    CHECK_THROWS_AS(kramers_multiplicity_check(H, t, KramersMode::Commuting), SymmetryViolation);
}

TEST_CASE("restrictTo gives a quaternionic structure on an invariant subspace") {
    std::mt19937_64 rng(7);
    AntiUnitary t = random_tau(rng, 4);
    Vec v = oracle::random_complex(rng, 8, 1);
    Mat B(8, 2);
    B.col(0) = v;
    B.col(1) = apply_tau(t, v);
    Eigen::HouseholderQR<Mat> qr(B);
    Mat Q = Mat(qr.householderQ()).leftCols(2);
    AntiUnitary r = t.restrictTo(Q);
    CHECK(r.dim() == 2);
    CHECK(r.unitarityResidual() < 1e-10);
    CHECK_THROWS_AS(t.restrictTo(Mat(oracle::random_unitary(rng, 8).leftCols(2))), SymmetryViolation);
}

TEST_CASE("direct sum of quaternionic structures") {
    AntiUnitary a = make_standard_J(1), b = make_standard_J(2);
    AntiUnitary s = AntiUnitary::directSum(a, b);
    CHECK(s.dim() == 6);
    Mat J = s.denseJ();
    CHECK((J.topLeftCorner(2, 2) - a.denseJ()).norm() == 0.0);
    CHECK((J.bottomRightCorner(4, 4) - b.denseJ()).norm() == 0.0);
}

TEST_CASE("Grading blocks and involution") {
    Grading g(std::vector<int>{1, -1, 1, -1});
    CHECK(g.plusDim() == 2);
    CHECK(g.minusDim() == 2);
    Mat inv = to_dense(g.involution());
    CHECK((inv * inv - Mat::Identity(4, 4)).norm() == 0.0);
    Mat A = Mat::Zero(4, 4);
    A(1, 0) = 3.0;  // + index 0 -> - index 1
    SpMat blk = g.block(to_sparse(A), -1, 1);
    CHECK(blk.rows() == 2);
    CHECK(to_dense(blk)(0, 0) == cplx(3.0));
}

TEST_CASE("z2_index refuses an ambiguous cut") {
    SpectralReport r;
    r.kernelDim = 1;
    r.detectionGap = 10.0;
    r.gapMin = 100.0;
    CHECK_THROWS_AS(z2_index(r), AmbiguousKernel);
    r.detectionGap = 1e6;
    CHECK(z2_index(r) == 1);
}

TEST_CASE("homotopy sweep: parity constant along a compact odd symmetric path") {
    std::mt19937_64 rng(8);
    AntiUnitary t = make_standard_J(3);
    Mat D0 = symmetrize_odd(Mat(oracle::random_complex(rng, 6, 6)), t);
    Mat K = symmetrize_odd(Mat(oracle::random_complex(rng, 6, 6)), t);
    std::vector<Mat> path;
    for (int s = 0; s <= 10; ++s) path.push_back(D0 + (s / 10.0) * K);
    std::vector<int> p = homotopy_parity_sweep(path, t, KernelPolicy::exact(), K.norm() / 10.0 * 1.0001);
    for (int x : p) CHECK(x == p.front());
    // a step larger than the bound is refused
    CHECK_THROWS_AS(homotopy_parity_sweep(path, t, KernelPolicy::exact(), K.norm() / 20.0), SymmetryViolation);
}
