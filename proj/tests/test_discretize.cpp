#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "z2index/discretize.hpp"
#include "z2index/spectra.hpp"

#include <set>

using namespace z2;

TEST_CASE("grid: odd node count, exact reflection") {
    CHECK_THROWS_AS(Grid1D(1.0, 10), InvalidParameter);
    CHECK_THROWS_AS(Grid1D(-1.0, 11), InvalidParameter);
    Grid1D g(3.0, 31);
    CHECK(g.coord(g.m()) == 0.0);
    CHECK(g.coord(0) == doctest::Approx(-3.0));
    for (Index j = 0; j < g.points(); ++j) CHECK(g.coord(g.mirror(j)) == doctest::Approx(-g.coord(j)));
    Grid1D p(M_PI, 21, true);
    CHECK(p.h() == doctest::Approx(2.0 * M_PI / 21.0));
    Mat R = to_dense(reflection_matrix(g));
    CHECK((R * R - Mat::Identity(31, 31)).norm() == 0.0);
}

TEST_CASE("staggered stencils are exact discrete adjoints") {
    Grid1D g(2.0, 21);
    auto [Dp, Dm] = derivative_stencil(g, StencilKind::StaggeredForward);
    CHECK(frobenius(SpMat(Dm + SpMat(Dp.adjoint()))) == 0.0);
    // forward difference of a linear function is exact in the interior
    Vec x(g.points());
    for (Index j = 0; j < g.points(); ++j) x(j) = g.coord(j);
    Vec d = Dp * x;
    for (Index j = 0; j + 1 < g.points(); ++j) CHECK(d(j).real() == doctest::Approx(1.0));
    CHECK_THROWS_AS(derivative_stencil(g, StencilKind::Fourier), InvalidParameter);
}

TEST_CASE("Fourier stencil differentiates retained modes exactly") {
    Grid1D g(M_PI, 15, true);
    auto [D, Dm] = derivative_stencil(g, StencilKind::Fourier);
    for (int k = -7; k <= 7; ++k) {
        Vec f(15), df(15);
        for (Index j = 0; j < 15; ++j) {
            f(j) = std::polar(1.0, k * g.coord(j));
            df(j) = I_unit * double(k) * f(j);
        }
        CHECK((D * f - df).norm() < 1e-11 * (1.0 + std::abs(k)));
    }
}

TEST_CASE("line operator and tau: odd symmetric, tau^2 = -1 on random vectors") {
    Grid1D g(10.0, 101);
    LineOperator L = build_line_operator(g);
    CHECK(check_odd_symmetric(L.op.matrix, L.tau) < 1e-12);
    LineOperator V = build_example_line_with_V(g);
    CHECK(check_odd_symmetric(V.op.matrix, V.tau) < 1e-12);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        Vec v = oracle::random_complex(rng, L.tau.dim(), 1);
        CHECK((apply_tau(L.tau, apply_tau(L.tau, v)) + v).norm() < 1e-12 * v.norm());
    }
    CHECK_NOTHROW(L.bundle.validate());
}

TEST_CASE("line builder refuses a tau-incompatible potential") {
    Grid1D g(5.0, 51);
    auto bad = [](double t) { return Mat(std::atan(t) * Mat::Identity(2, 2)); };
    CHECK_THROWS_AS(build_line_with_potential(g, bad, "bad"), SymmetryViolation);
}

TEST_CASE("line operator kernel agrees with the dense oracle at several sizes") {
    for (int n : {401, 801}) {
        Grid1D g(20.0, n);
        LineOperator L = build_line_operator(g);
        const Mat D = to_dense(L.op.matrix), W = to_dense(L.op.artifactWeight);
        const int expect = oracle::physical_kernel_count(D, W, 1e-6);
        CHECK(expect == 1);
        CHECK(analyze_kernel(L.op, KernelPolicy::finiteDifference()).report.kernelDim == expect);
        // the negated potential still has index 1 (the other component carries the mode)
        LineOperator M = build_line_operator(g, -1.0);
        CHECK(oracle::physical_kernel_count(to_dense(M.op.matrix), W, 1e-6) == 1);
    }
}

TEST_CASE("trivial torus: singular values are exactly sqrt(m^2 + n^2)") {
    for (int K : {2, 4}) {
        TorusTrivial T = build_torus_trivial(K);
        std::multiset<double> expect;
        for (int m = -K; m <= K; ++m)
            for (int n = -K; n <= K; ++n) expect.insert(std::sqrt(double(m * m + n * n)));
        std::vector<double> s = singular_values(T.Dplus.matrix);
        REQUIRE(s.size() == expect.size());
        size_t i = 0;
        for (double e : expect) CHECK(std::abs(s[i++] - e) <= 1e-14 * (1.0 + e));
        CHECK(check_odd_symmetric(T.full.matrix, T.tau) < 1e-12);
        CHECK(kernel_dimension(T.Dplus, KernelPolicy::exact()).kernelDim == 1);
        CHECK(T.modes[size_t(torus_mode_index(K, 1, -2))] == std::pair<int, int>{1, -2});
        CHECK_NOTHROW(T.bundle.validate());
    }
}

TEST_CASE("flux lattice carries n flux quanta; mismatch is detected") {
    for (int n : {0, 1, 2, 3, -1}) {
        TorusLattice lat = make_flux_lattice(10, 12, n);
        CHECK(lattice_flux(lat) == doctest::Approx(double(n)).epsilon(1e-12));
    }
    TorusLattice lat = make_flux_lattice(8, 8, 1);
    CHECK_THROWS_AS(build_torus_flux(2, lat, 0.5), FluxMismatch);
    lat.linkT(0, 0) *= 2.0;
    CHECK_THROWS_AS(build_torus_flux(1, lat, 0.5), FluxMismatch);
}

TEST_CASE("flux torus: ind dbar = n, oracle agreement, odd symmetry") {
    for (int n : {1, 2}) {
        TorusLattice lat = make_flux_lattice(12, 12, n);
        FluxTorus F = build_torus_flux(n, lat, 0.5);
        CHECK(check_odd_symmetric(F.full.matrix, F.tau) < 1e-10);
        CHECK(F.tau.unitarityResidual() < 1e-12);
        CHECK_NOTHROW(F.bundle.validate());
        const Mat X = to_dense(F.dbar.matrix), W = to_dense(F.dbar.artifactWeight);
        const int kx = oracle::physical_kernel_count(X, W, 1e-6);
        const int kxh = oracle::physical_kernel_count(X.adjoint(), W, 1e-6);
        CHECK(kx - kxh == n);
        const KernelPolicy pol = KernelPolicy::finiteDifference();
        const int lx = analyze_kernel(F.dbar, pol).report.kernelDim;
        const int lxh = analyze_kernel(F.dbar.adjoint("dbar_adjoint"), pol).report.kernelDim;
        CHECK(lx == kx);
        CHECK(lxh == kxh);
        CHECK(z2_index(analyze_kernel(F.Dplus, pol).report) == n % 2);
    }
}

TEST_CASE("doubling guard: the Wilson term restores dim ker dbar = 1 at n = 1") {
    TorusLattice lat = make_flux_lattice(12, 12, 1);
    FluxTorus naive = build_torus_flux(1, lat, 0.0);
    FluxTorus wilson = build_torus_flux(1, lat, 0.5);
    const int kw = analyze_kernel(wilson.dbar, KernelPolicy::finiteDifference()).report.kernelDim;
    CHECK(kw == 1);
    // r = 0 is recorded but not asserted: s-doublers may inflate the count
    const int raw0 = oracle::kernel_count(to_dense(naive.dbar.matrix), 1e-6);
    MESSAGE("raw near-null count of dbar without Wilson term: " << raw0);
}

TEST_CASE("Clifford grading: Gamma is a Hermitian involution anticommuting with the generators") {
    Mat s1(2, 2), s2(2, 2);
    s1 << 0.0, 1.0, 1.0, 0.0;
    s2 << 0.0, -I_unit, I_unit, 0.0;
    std::vector<Mat> gens = {I_unit * s1, I_unit * s2};
    CliffordGrading c = clifford_gamma(gens);
    CHECK((c.gamma * c.gamma - Mat::Identity(2, 2)).norm() < 1e-12);
    CHECK((c.gamma - c.gamma.adjoint()).norm() < 1e-12);
    for (const Mat& g : gens) CHECK((c.gamma * g + g * c.gamma).norm() < 1e-12);
    CHECK(c.grading.plusDim() == 1);
    CHECK_THROWS_AS(clifford_gamma({s1}), CliffordViolation);

    Grading gr(std::vector<int>{1, 1, -1});
    Mat gamma = cylinder_clifford(gr);
    CHECK((gamma * gamma + Mat::Identity(3, 3)).norm() == 0.0);
    Mat odd = Mat::Zero(3, 3);
    odd(2, 0) = 1.0;
    odd(0, 2) = 2.0;
    CHECK((gamma * odd + odd * gamma).norm() == 0.0);
}
