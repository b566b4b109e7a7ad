#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "z2index/toeplitz.hpp"

using namespace z2;

namespace {

const std::function<cplx(cplx)> conj_map = [](cplx z) { return std::conj(z); };

std::vector<cplx> grid_nodes(double half, int perSide) {
    std::vector<cplx> z;
    for (int i = 0; i < perSide; ++i)
        for (int j = 0; j < perSide; ++j)
            z.emplace_back(-half + 2.0 * half * i / (perSide - 1), -half + 2.0 * half * j / (perSide - 1));
    return z;
}

Symbol constant_symbol(Mat m, double radius = 0.0) {
    Symbol s;
    s.matrixSize = m.rows();
    s.sampler = [m](cplx) { return m; };
    s.invertibilityRadius = radius;
    s.invertibilityBound = 1.0;
    return s;
}

DiscreteOperator dense_op(const Mat& m) {
    DiscreteOperator op;
    op.matrix = to_sparse(m);
    return op;
}

}  // namespace

TEST_CASE("check_symbol: symmetry and invertibility at infinity") {
    const std::vector<cplx> nodes = grid_nodes(4.0, 21);
    CHECK_NOTHROW(check_symbol(constant_symbol(Mat::Identity(2, 2)), nodes, conj_map));
    CHECK_THROWS_AS(check_symbol(constant_symbol(Mat::Zero(2, 2), 1.0), nodes, conj_map), NotInvertibleAtInfinity);
    SymbolReport w = check_symbol(landau_winding_symbol(), nodes, conj_map);
    CHECK(w.symmetryResidual < 1e-14);
    CHECK(w.worstInverseNorm >= 1.0);
    // i I is anti-Hermitian: f(conj z) = i I but f(z)^† = -i I
    CHECK_THROWS_AS(check_symbol(constant_symbol(Mat(I_unit * Mat::Identity(2, 2))), nodes, conj_map),
                    SymmetryViolation);
    // compact perturbations keep the symmetry
    Symbol g = symbol_sum(landau_winding_symbol(), landau_perturbation(0.7, {0.2, -0.3, 0.5}));
    CHECK(check_symbol(g, nodes, conj_map).symmetryResidual < 1e-12);
}

TEST_CASE("certify_gap: small exact cases") {
    AntiUnitary t = make_standard_J(2);
    Mat D = Mat::Zero(4, 4);
    D.diagonal() << 0.0, 2.0, 0.0, 2.0;
    KernelProjection kp = certify_gap(dense_op(D), t, KernelPolicy::exact());
    CHECK(kp.gap.kernelDim == 2);
    CHECK(kp.gap.gamma == doctest::Approx(2.0));
    CHECK(kp.gap.isolated);
    REQUIRE(kp.tau.has_value());
    CHECK(kp.tau->dim() == 2);
    CHECK((D * kp.basis).norm() < 1e-14);
    CHECK((kp.basis.adjoint() * kp.basis - Mat::Identity(2, 2)).norm() < 1e-14);

    KernelProjection id = certify_gap(dense_op(Mat::Identity(4, 4)), t, KernelPolicy::exact());
    CHECK(id.gap.kernelDim == 0);
    CHECK(id.gap.isolated);
    CHECK_FALSE(id.tau.has_value());

    // spectrum 1e-4 next to 1: no clean separation at gapMin 1e12
    Mat S = Mat::Zero(4, 4);
    S.diagonal() << 1e-4, 1.0, 1e-4, 1.0;
    CHECK_THROWS_AS(certify_gap(dense_op(S), t, KernelPolicy{1e-10, 1e-3, 1e12}), NoGap);
}

TEST_CASE("Landau model: orthonormal orbitals, kernel 2(M+1), gap sqrt 2 (Eigen oracle)") {
    for (int M : {8, 12}) {
        const int NL = std::max(2, M / 4);
        LandauModel m = build_landau_model(NL, M);
        CHECK(m.orthonormalityError < 1e-10);
        // Gram matrix of the E+ orbitals from the stored quadrature, computed here
        Index nplus = 0;
        for (int s : m.sector) nplus += s > 0;
        Mat V = m.orbitalValues.leftCols(nplus);
        Mat G = Mat::Zero(nplus, nplus);
        for (size_t q = 0; q < m.quadWeights.size(); ++q)
            G += m.quadWeights[q] * V.row(Index(q)).adjoint() * V.row(Index(q));
        CHECK((G - Mat::Identity(nplus, nplus)).cwiseAbs().maxCoeff() < 1e-10);

        const Mat D = to_dense(m.D.matrix);
        CHECK((D - D.adjoint()).norm() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Mat> es(D);
        int ker = 0;
        double gap = INFINITY;
        for (Index i = 0; i < es.eigenvalues().size(); ++i) {
            const double a = std::abs(es.eigenvalues()(i));
            if (a < 1e-10) ++ker;
            else gap = std::min(gap, a);
        }
        CHECK(ker == 2 * (M + 1));
        CHECK(gap == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
        CHECK(check_odd_symmetric(m.D.matrix, m.tau) < 1e-12);

        KernelProjection kp = certify_gap(m.D, m.tau, KernelPolicy::exact());
        CHECK(kp.gap.kernelDim == ker);
        CHECK(kp.gap.gamma == doctest::Approx(gap));
    }
}

TEST_CASE("compression: f = I gives the identity; T is odd symmetric under the induced tau") {
    LandauModel m = build_landau_model(4, 16);
    KernelProjection kp = certify_gap(m.D, m.tau, KernelPolicy::exact());
    ToeplitzMatrix I = compress(kp, landau_multiplication(m, constant_symbol(Mat::Identity(2, 2))));
    CHECK((I.T - Mat::Identity(I.T.rows(), I.T.cols())).norm() < 1e-10);

    const Mat Mf = landau_multiplication(m, landau_winding_symbol());
    ToeplitzMatrix T = compress(kp, Mf);
    CHECK(check_odd_symmetric(T.T, T.tau) < 1e-10);
    // oracle: the same compression from an Eigen kernel basis
    Eigen::SelfAdjointEigenSolver<Mat> es(to_dense(m.D.matrix));
    std::vector<Index> idx;
    for (Index i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()(i)) < 1e-10) idx.push_back(i);
    Mat B(Mf.rows(), Index(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i) B.col(Index(i)) = es.eigenvectors().col(idx[i]);
    std::vector<double> a = oracle::singular_values(T.T), b = oracle::singular_values(B.adjoint() * Mf * B);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
}

TEST_CASE("compression does not depend on the kernel basis: unitary change keeps singular values and parity") {
    LandauModel m = build_landau_model(4, 16);
    KernelProjection kp = certify_gap(m.D, m.tau, KernelPolicy::exact());
    const Mat Mf = landau_multiplication(m, landau_winding_symbol());
    ToeplitzMatrix T = compress(kp, Mf, m.highMWeight);
    std::mt19937_64 rng(51);
    Mat U = oracle::random_unitary(rng, kp.basis.cols());
    KernelProjection rot = kp;
    rot.basis = kp.basis * U;
    rot.tau = m.tau.restrictTo(rot.basis);
    ToeplitzMatrix R = compress(rot, Mf, m.highMWeight);
    CHECK((R.T - U.adjoint() * T.T * U).norm() < 1e-10);
    std::vector<double> a = oracle::singular_values(T.T), b = oracle::singular_values(R.T);
    for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
    CHECK(check_odd_symmetric(R.T, R.tau) < 1e-10);
    const KernelPolicy pol = KernelPolicy::finiteDifference();
    const int pt = z2_index(analyze_kernel(toeplitz_operator(T, "T"), pol).report);
    const int pr = z2_index(analyze_kernel(toeplitz_operator(R, "R"), pol).report);
    CHECK(pt == pr);
    // oracle parity from the same weight
    CHECK(oracle::physical_kernel_count(T.T, T.artifactWeight, 1e-6) % 2 == pt);
}

TEST_CASE("winding symbol: ind_tau T_f = ind_tau C = 1; identity gives 0") {
    ToeplitzComparison c = toeplitz_vs_callias(
        [](int M) { return landau_instance(std::max(2, M / 4), M, landau_winding_symbol()); }, {12, 16, 20},
        KernelPolicy::finiteDifference());
    CHECK(c.agree);
    CHECK(c.indTf == 1);
    CHECK(c.indC == 1);
    ToeplitzComparison id = toeplitz_vs_callias(
        [](int M) { return landau_instance(std::max(2, M / 4), M, constant_symbol(Mat::Identity(2, 2))); },
        {12, 16, 20}, KernelPolicy::finiteDifference());
    CHECK(id.indTf == 0);
    CHECK(id.indC == 0);
}
