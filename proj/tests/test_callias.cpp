#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "z2index/callias.hpp"

using namespace z2;

namespace {

Mat theta2() {
    Mat th(2, 2);
    th << 0.0, 1.0, -1.0, 0.0;
    return th;
}

DiscreteOperator i_d_dt(const Grid1D& g) {
    LineOperator L = build_line_operator(g);
    auto [Dp, Dm] = derivative_stencil(g, StencilKind::StaggeredForward);
    return L.op.withMatrix(SpMat(I_unit * kron(Dp, sparse_identity(2))), "i_d_dt");
}

Potential diag_potential(std::function<double(double)> a, double K) {
    return Potential{[a](double t) {
                         Mat p = Mat::Zero(2, 2);
                         p(0, 0) = a(t);
                         p(1, 1) = a(-t);
                         return p;
                     },
                     K, 0.0};
}

}  // namespace

TEST_CASE("admissibility margin examples") {
    Grid1D g(10.0, 4001);
    DiscreteOperator D = i_d_dt(g);
    std::vector<Index> outside;
    for (Index j = 0; j < g.points(); ++j)
        if (std::abs(g.coord(j)) >= 1.0 - 1e-12) outside.push_back(j);
    Potential at{[](double t) { return Mat(Mat::Constant(1, 1, cplx(std::atan(t)))); }, 1.0, 0.0};
    // continuum value arctan(1)^2 - 1/(1 + 1^2); the discrete commutator is a first-order difference
    MarginReport m = admissibility_margin(D, at, outside);
    CHECK(m.margin == doctest::Approx(std::pow(M_PI / 4.0, 2) - 0.5).epsilon(0.02));
    CHECK(std::abs(m.worstCoord) == doctest::Approx(1.0));

    Potential one{[](double) { return Mat(Mat::Identity(1, 1)); }, 0.0, 0.0};
    CHECK(admissibility_margin(D, one, nodes_outside(D, -1.0)).margin == doctest::Approx(1.0).epsilon(1e-12));

    Potential zero{[](double) { return Mat(Mat::Zero(1, 1)); }, 0.0, 0.0};
    CHECK_THROWS_AS(admissibility_margin(D, zero, nodes_outside(D, -1.0)), NotAdmissible);
}

TEST_CASE("nodes_outside respects the essential radius") {
    Grid1D g(5.0, 11);
    DiscreteOperator D = i_d_dt(g);
    std::vector<Index> n = nodes_outside(D, 2.5);
    for (Index j : n) CHECK(std::abs(g.coord(j)) > 2.5);
    CHECK(n.size() == 6);
}

TEST_CASE("empty essential support: no kernel and sigma_min^2 >= 0.9 margin (oracle SVD)") {
    Grid1D g(10.0, 301);
    DiscreteOperator D = i_d_dt(g);
    AntiUnitary tau = line_tau(g);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> uc(0.8, 1.4), ua(0.1, 0.3);
    for (int k = 0; k < 5; ++k) {
        const double c0 = uc(rng), a = ua(rng);
        Potential phi = diag_potential([=](double t) { return -c0 - a * (1.0 + std::sin(t)); }, -1.0);
        phi = certify_potential(D, phi);
        CHECK(phi.margin > 0.0);
        DiscreteOperator B = build_callias_ungraded(D, phi, tau);
        std::vector<double> s = oracle::singular_values(to_dense(B.matrix));
        CHECK(s.front() * s.front() >= 0.9 * phi.margin);
        CHECK(oracle::kernel_count(to_dense(B.matrix), 1e-6) == 0);
    }
}

TEST_CASE("Callias assembly: B = i d/dt + i diag(arctan, -arctan) has ind_tau 1; graded double is odd symmetric") {
    Grid1D g(20.0, 801);
    DiscreteOperator D = i_d_dt(g);
    AntiUnitary tau = line_tau(g);
    Potential phi = diag_potential([](double t) { return std::atan(t); }, 2.0);
    DiscreteOperator B = build_callias_ungraded(D, phi, tau);
    CHECK(check_odd_symmetric(B.matrix, tau) < 1e-12);
    const Mat Bd = to_dense(B.matrix), W = to_dense(B.artifactWeight);
    CHECK(oracle::physical_kernel_count(Bd, W, 1e-6) == 1);
    CHECK(z2_index(analyze_kernel(B, KernelPolicy::finiteDifference()).report) == 1);

    auto [G, tau2] = graded_double(B, tau);
    CHECK(G.rows() == 2 * B.rows());
    CHECK(check_odd_symmetric(G.matrix, tau2) < 1e-12);
    // B sits in the lower-left block
    const Mat Gd = to_dense(G.matrix);
    CHECK((Gd.bottomLeftCorner(B.rows(), B.cols()) - Bd).norm() == 0.0);
    CHECK((Gd.topRightCorner(B.rows(), B.cols()) - Bd.adjoint()).norm() == 0.0);

    // Phi -> -Phi and Phi -> lambda Phi keep the parity
    Potential neg = diag_potential([](double t) { return -std::atan(t); }, 2.0);
    CHECK(z2_index(analyze_kernel(build_callias_ungraded(D, neg, tau), KernelPolicy::finiteDifference()).report) == 1);
    for (double lam : {2.0, 5.0}) {
        Potential sc = diag_potential([lam](double t) { return lam * std::atan(t); }, 2.0);
        CHECK(z2_index(analyze_kernel(build_callias_ungraded(D, sc, tau), KernelPolicy::finiteDifference()).report) ==
              1);
    }
}

TEST_CASE("Callias assembly refuses a tau-incompatible potential") {
    Grid1D g(10.0, 201);
    DiscreteOperator D = i_d_dt(g);
    Potential bad{[](double t) { return Mat(Mat::Constant(1, 1, cplx(2.0 + std::atan(t)))); }, 3.0, 0.0};
    CHECK_THROWS_AS(build_callias_ungraded(D, bad, line_tau(g)), SymmetryViolation);
}

TEST_CASE("boundary reduction: diagonal example") {
    Mat phi(2, 2), gamma(2, 2);
    phi << 1.0, 0.0, 0.0, -1.0;
    gamma << I_unit, 0.0, 0.0, -I_unit;
    BoundaryReduction br = boundary_reduction({phi}, {gamma}, SpMat(0, 0));
    Mat expect(2, 2);
    expect << 1.0, 0.0, 0.0, 0.0;
    CHECK((br.projPlus[0] - expect).norm() < 1e-14);
    CHECK((br.projPlus[0] + br.projMinus[0] - Mat::Identity(2, 2)).norm() < 1e-14);
    CHECK(br.alpha.plusDim() == 1);  // alpha = -i gamma = diag(1, -1) restricted to span(e1)
    CHECK(br.alpha.minusDim() == 0);
}

TEST_CASE("boundary reduction: two-point hypersurface gives ind = dim E_N+^+ mod 2") {
    // N = {-a, a}; Phi = +1 at a, -1 at -a on C^2 with gamma = diag(i, -i) (outward normal sign)
    Mat g(2, 2);
    g << I_unit, 0.0, 0.0, -I_unit;
    std::vector<Mat> phis = {-Mat::Identity(2, 2), Mat(Mat::Identity(2, 2))};
    std::vector<Mat> gammas = {Mat(-g), g};
    BoundaryReduction br = boundary_reduction(phis, gammas, SpMat(0, 0));
    CHECK(br.reducedOperator.matrix.nonZeros() == 0);
    CHECK(br.alpha.plusDim() == 1);
    CHECK(br.alpha.minusDim() == 1);
    CHECK(kernel_dimension(to_dense(br.reducedPlus.matrix), KernelPolicy::exact()).kernelDim % 2 == 1);
}

TEST_CASE("boundary reduction errors") {
    Mat g(2, 2);
    g << I_unit, 0.0, 0.0, -I_unit;
    Mat sing = Mat::Zero(2, 2);
    sing(0, 0) = 1.0;
    CHECK_THROWS_AS(boundary_reduction({sing}, {g}, SpMat(0, 0)), SingularPotential);
    CHECK_THROWS_AS(boundary_reduction({Mat(Mat::Identity(2, 2))}, {Mat(Mat::Identity(2, 2))}, SpMat(0, 0)),
                    CliffordViolation);
    Mat offd(2, 2);
    offd << 0.0, 1.0, 1.0, 0.0;  // spectral projection does not commute with alpha = diag(1, -1)
    CHECK_THROWS_AS(boundary_reduction({offd}, {g}, SpMat(0, 0)), SymmetryViolation);
}

TEST_CASE("boundary reduction on T^2 reproduces the torus Dirac operator") {
    TorusTrivial T = build_torus_trivial(2);
    const Index M = T.Dplus.cols();
    std::vector<Triplet> perm;
    for (Index p = 0; p < M; ++p) {
        perm.emplace_back(2 * p, p, 1.0);
        perm.emplace_back(2 * p + 1, M + p, 1.0);
    }
    SpMat P(2 * M, 2 * M);
    P.setFromTriplets(perm.begin(), perm.end());
    SpMat Dn = P * T.full.matrix * SpMat(P.transpose());
    Mat g(2, 2);
    g << I_unit, 0.0, 0.0, -I_unit;
    std::vector<Mat> phis(size_t(M), Mat::Identity(2, 2)), gammas(size_t(M), g);
    BoundaryReduction br = boundary_reduction(phis, gammas, Dn);
    // E_N+ is everything, alpha = grading: the reduced operator is D_N up to the frame
    std::vector<double> a = oracle::singular_values(to_dense(br.reducedPlus.matrix));
    std::vector<double> b = oracle::singular_values(to_dense(T.Dplus.matrix));
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
    CHECK(kernel_dimension(br.reducedPlus, KernelPolicy::exact()).kernelDim == 1);
}

TEST_CASE("model operator on the zero fiber: dim ker M(+/-) = 1, oracle agreement") {
    DiscreteOperator DN;
    DN.matrix = SpMat(2, 2);
    Grading gr(std::vector<int>{1, -1});
    AntiUnitary tn(theta2());
    Grid1D g(12.0, 401);
    for (int s : {1, -1}) {
        ModelOperator M = build_model_operator(DN, gr, tn, g, s);
        CHECK(check_odd_symmetric(M.op.matrix, M.tau) < 1e-12);
        CHECK(M.margin.margin > 0.0);
        const int expect = oracle::physical_kernel_count(to_dense(M.op.matrix), to_dense(M.op.artifactWeight), 1e-6);
        CHECK(expect == 1);
        CHECK(analyze_kernel(M.op, KernelPolicy::finiteDifference()).report.kernelDim == expect);
    }
    CHECK(model_sign_profile(0.0) == 0.0);
    CHECK(model_sign_profile(1.0) > 0.99);
    CHECK(model_sign_profile(-1.0) < -0.99);
}

TEST_CASE("model operator on a small torus fiber matches dim ker of the chiral blocks") {
    TorusTrivial T = build_torus_trivial(1);
    // the decay length is 1/lambda, so the box must be long enough that the
    // boundary copy separates from the physical mode
    Grid1D g(20.0, 401);
    for (int s : {1, -1}) {
        ModelOperator M = build_model_operator(T.full, T.grading, T.tau, g, s);
        const int expect = oracle::physical_kernel_count_blocks(M.op.matrix, M.op.artifactWeight, 1e-6);
        CHECK(expect == 1);
        CHECK(analyze_kernel(M.op, KernelPolicy::finiteDifference()).report.kernelDim == 1);
    }
}

TEST_CASE("cut and paste: identity surgery, window mismatch, four-term parity") {
    Grid1D g(12.0, 481);
    LineOperator L0 = build_line_with_potential(
        g,
        [](double t) {
            Mat p = Mat::Zero(2, 2);
            p(0, 0) = std::atan(t);
            p(1, 1) = -std::atan(t);
            return p;
        },
        "op0");
    auto [a2, a3] = cut_and_paste(L0.op, L0.op, 4.0, L0.tau);
    CHECK(frobenius(SpMat(a2.matrix - L0.op.matrix)) == 0.0);
    CHECK(frobenius(SpMat(a3.matrix - L0.op.matrix)) == 0.0);

    // op1 agrees with op0 on |t| < 5 and has both tails positive outside
    auto tail = [](double t) {
        const double s = std::clamp(std::abs(t) - 5.0, 0.0, 1.0);
        const double w = s * s * (3.0 - 2.0 * s);
        return (1.0 - w) * std::atan(t) + w * 1.5;
    };
    LineOperator L1 = build_line_with_potential(
        g,
        [&](double t) {
            Mat p = Mat::Zero(2, 2);
            p(0, 0) = tail(t);
            p(1, 1) = tail(-t);
            return p;
        },
        "op1");
    auto [op2, op3] = cut_and_paste(L0.op, L1.op, 4.0, L0.tau);
    CHECK(check_odd_symmetric(op2.matrix, L0.tau) < 1e-12);
    CHECK(check_odd_symmetric(op3.matrix, L0.tau) < 1e-12);
    int sum = 0;
    for (const DiscreteOperator* op : {&L0.op, &L1.op, &op2, &op3}) {
        const int k = oracle::physical_kernel_count(to_dense(op->matrix), to_dense(op->artifactWeight), 1e-6);
        CHECK(analyze_kernel(*op, KernelPolicy::finiteDifference()).report.kernelDim == k);
        sum += k;
    }
    CHECK(sum % 2 == 0);

    // potentials differing at the cut are refused
    LineOperator L2 = build_line_operator(g, -1.0);
    CHECK_THROWS_AS(cut_and_paste(L0.op, L2.op, 4.0, L0.tau), MismatchAtCut);
}
