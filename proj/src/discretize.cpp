#include "z2index/discretize.hpp"

#include <cmath>
#include <sstream>

namespace z2 {

Grid1D::Grid1D(double halfLength, Index points, bool periodic)
    : L_(halfLength), n_(points), periodic_(periodic) {
    if (!(halfLength > 0.0)) throw InvalidParameter("grid half length must be positive");
    if (points < 3 || points % 2 == 0) throw InvalidParameter("grid point count must be odd and >= 3");
    h_ = periodic ? 2.0 * L_ / double(n_) : 2.0 * L_ / double(n_ - 1);
}

std::vector<double> Grid1D::coords() const {
    std::vector<double> c(static_cast<size_t>(n_));
    for (Index j = 0; j < n_; ++j) c[static_cast<size_t>(j)] = coord(j);
    return c;
}

void FiberBundle::validate() const {
    if (thetaFiber.rows() != fiberDim || thetaFiber.cols() != fiberDim)
        throw DimensionMismatch("fiber theta has the wrong size");
    if (grading.dim() != 0 && grading.dim() != fiberDim) throw DimensionMismatch("fiber grading size");
    // (theta conj)^2 = theta conj(theta)
    Mat sq = thetaFiber * thetaFiber.conjugate();
    if ((sq - double(thetaSquare) * Mat::Identity(fiberDim, fiberDim)).norm() > 1e-12)
        throw SymmetryViolation("fiber theta does not square to the declared sign");
    if (grading.dim() == fiberDim) {
        // graded fibers: theta maps E+ to E- and back
        for (Index i = 0; i < fiberDim; ++i)
            for (Index j = 0; j < fiberDim; ++j)
                if (std::abs(thetaFiber(i, j)) > 1e-14 &&
                    grading.signs()[static_cast<size_t>(i)] == grading.signs()[static_cast<size_t>(j)])
                    throw SymmetryViolation("fiber theta is not odd with respect to the grading");
    }
}

SpMat reflection_matrix(const Grid1D& grid) {
    const Index n = grid.points();
    std::vector<Triplet> t;
    for (Index j = 0; j < n; ++j) t.emplace_back(grid.mirror(j), j, 1.0);
    SpMat P(n, n);
    P.setFromTriplets(t.begin(), t.end());
    return P;
}

std::pair<SpMat, SpMat> derivative_stencil(const Grid1D& grid, StencilKind kind) {
    const Index n = grid.points();
    const double h = grid.h();
    SpMat Dp(n, n);
    std::vector<Triplet> t;
    if (kind == StencilKind::Fourier) {
        if (!grid.periodic()) throw InvalidParameter("Fourier stencil needs a periodic grid");
        // Odd N: D_jk = (pi/L) * (-1)^(j-k) / (2 sin(pi (j-k) / N)), exact on |k| <= m.
        const double scale = M_PI / grid.halfLength();
        for (Index j = 0; j < n; ++j)
            for (Index k = 0; k < n; ++k) {
                if (j == k) continue;
                const Index d = j - k;
                const double sgn = (std::abs(d) % 2 == 0) ? 1.0 : -1.0;
                t.emplace_back(j, k, scale * sgn / (2.0 * std::sin(M_PI * double(d) / double(n))));
            }
    } else {
        for (Index j = 0; j < n; ++j) {
            if (kind == StencilKind::StaggeredForward) {
                t.emplace_back(j, j, -1.0 / h);
                if (j + 1 < n)
                    t.emplace_back(j, j + 1, 1.0 / h);
                else if (grid.periodic())
                    t.emplace_back(j, 0, 1.0 / h);
            } else {
                t.emplace_back(j, j, 1.0 / h);
                if (j > 0)
                    t.emplace_back(j, j - 1, -1.0 / h);
                else if (grid.periodic())
                    t.emplace_back(j, n - 1, -1.0 / h);
            }
        }
    }
    Dp.setFromTriplets(t.begin(), t.end());
    SpMat Dm = -SpMat(Dp.adjoint());
    return {Dp, Dm};
}

AntiUnitary line_tau(const Grid1D& grid) {
    Mat theta(2, 2);
    theta << 0.0, 1.0, -1.0, 0.0;
    return AntiUnitary(kron(reflection_matrix(grid), to_sparse(theta)));
}

SpMat bundle_map(const Grid1D& grid, const std::function<Mat(double)>& field, Index fiberDim) {
    const Index n = grid.points();
    std::vector<Triplet> t;
    for (Index j = 0; j < n; ++j) {
        Mat f = field(grid.coord(j));
        if (f.rows() != fiberDim || f.cols() != fiberDim) throw DimensionMismatch("bundle map fiber size");
        for (Index a = 0; a < fiberDim; ++a)
            for (Index b = 0; b < fiberDim; ++b)
                if (f(a, b) != cplx(0.0)) t.emplace_back(j * fiberDim + a, j * fiberDim + b, f(a, b));
    }
    SpMat M(n * fiberDim, n * fiberDim);
    M.setFromTriplets(t.begin(), t.end());
    return M;
}

namespace {

FiberBundle line_bundle() {
    FiberBundle b;
    b.fiberDim = 2;
    b.thetaFiber = Mat(2, 2);
    b.thetaFiber << 0.0, 1.0, -1.0, 0.0;
    b.thetaSquare = -1;
    return b;
}

}  // namespace

LineOperator build_line_with_potential(const Grid1D& grid, const std::function<Mat(double)>& phi,
                                       const std::string& name, double boundaryLayer) {
    auto [Dp, Dm] = derivative_stencil(grid, StencilKind::StaggeredForward);
    SpMat D = kron(Dp, sparse_identity(2)) + bundle_map(grid, phi, 2);
    D.prune(cplx(0.0), 0.0);
    LineOperator out{DiscreteOperator{}, line_tau(grid), grid, line_bundle()};
    out.op.name = name;
    out.op.matrix = D;
    out.op.modelClass = ModelClass::FiniteDifference;
    out.op.coords = grid.coords();
    out.op.fiberDim = 2;
    if (!grid.periodic())
        out.op.artifactWeight = boundary_layer_weight(out.op.coords, 2, grid.halfLength() - boundaryLayer);
    const double res = check_odd_symmetric(D, out.tau);
    if (res > 1e-12) {
        std::ostringstream os;
        os << name << ": potential is not compatible with tau, residual " << res;
        throw SymmetryViolation(os.str());
    }
    return out;
}

LineOperator build_line_operator(const Grid1D& grid, double potentialSign, double boundaryLayer) {
    if (grid.periodic()) throw InvalidParameter("line operator needs a non-periodic grid");
    auto phi = [potentialSign](double t) {
        Mat p = Mat::Zero(2, 2);
        p(0, 0) = potentialSign * std::atan(t);
        p(1, 1) = -potentialSign * std::atan(t);
        return p;
    };
    return build_line_with_potential(grid, phi, "line", boundaryLayer);
}

LineOperator build_example_line_with_V(const Grid1D& grid, double boundaryLayer) {
    LineOperator base = build_line_operator(grid, 1.0, boundaryLayer);
    base.op.matrix = I_unit * base.op.matrix;
    base.op.name = "line_with_V";
    return base;
}

Index torus_mode_index(int K, int m, int n) { return Index(m + K) * (2 * K + 1) + (n + K); }

TorusTrivial build_torus_trivial(int K) {
    if (K < 1) throw InvalidParameter("torus cutoff must be >= 1");
    TorusTrivial out{K, {}, {}, {}, make_standard_J(1), Grading(), FiberBundle()};
    const Index M = Index(2 * K + 1) * (2 * K + 1);
    out.modes.resize(static_cast<size_t>(M));
    std::vector<Triplet> dp, full, J;
    for (int m = -K; m <= K; ++m)
        for (int n = -K; n <= K; ++n) {
            const Index p = torus_mode_index(K, m, n), q = torus_mode_index(K, -m, -n);
            out.modes[static_cast<size_t>(p)] = {m, n};
            const cplx sym(double(-n), double(m));  // i m - n
            dp.emplace_back(p, p, sym);
            full.emplace_back(M + p, p, sym);           // D+ : E+ -> E-
            full.emplace_back(p, M + p, std::conj(sym));  // D- = (D+)^†
            J.emplace_back(p, M + q, 1.0);
            J.emplace_back(M + p, q, -1.0);
        }
    out.Dplus.name = "torus_trivial_Dplus";
    out.Dplus.matrix.resize(M, M);
    out.Dplus.matrix.setFromTriplets(dp.begin(), dp.end());
    out.Dplus.matrix.prune(cplx(0.0), 0.0);
    out.Dplus.modelClass = ModelClass::Exact;
    out.full.name = "torus_trivial_D";
    out.full.matrix.resize(2 * M, 2 * M);
    out.full.matrix.setFromTriplets(full.begin(), full.end());
    out.full.matrix.prune(cplx(0.0), 0.0);
    out.full.modelClass = ModelClass::Exact;
    SpMat Js(2 * M, 2 * M);
    Js.setFromTriplets(J.begin(), J.end());
    out.tau = AntiUnitary(Js);
    out.grading = Grading::fromDims(M, M);
    out.bundle.fiberDim = 2;
    out.bundle.grading = Grading(std::vector<int>{1, -1});
    out.bundle.thetaFiber = Mat(2, 2);
    out.bundle.thetaFiber << 0.0, 1.0, -1.0, 0.0;
    out.bundle.thetaSquare = -1;
    return out;
}

CliffordGrading clifford_gamma(const std::vector<Mat>& gens, double tol) {
    if (gens.empty()) throw CliffordViolation("no generators");
    const Index d = gens[0].rows();
    for (size_t i = 0; i < gens.size(); ++i) {
        if (gens[i].rows() != d || gens[i].cols() != d) throw DimensionMismatch("generator sizes differ");
        for (size_t j = 0; j < gens.size(); ++j) {
            Mat ac = gens[i] * gens[j] + gens[j] * gens[i];
            Mat expect = (i == j ? -2.0 : 0.0) * Mat::Identity(d, d);
            if ((ac - expect).norm() > tol * 10.0) {
                std::ostringstream os;
                os << "c(e" << i + 1 << ")c(e" << j + 1 << ") + c(e" << j + 1 << ")c(e" << i + 1
                   << ") deviates from -2 delta by " << (ac - expect).norm();
                throw CliffordViolation(os.str());
            }
        }
    }
    const int n = static_cast<int>(gens.size());
    cplx phase = 1.0;
    for (int k = 0; k < (n + 1) / 2; ++k) phase *= I_unit;
    Mat G = phase * Mat::Identity(d, d);
    for (const Mat& c : gens) G = G * c;
    if ((G * G - Mat::Identity(d, d)).norm() > 1e-10) throw CliffordViolation("Gamma^2 != I");
    CliffordGrading out;
    out.gamma = G;
    Mat off = G;
    off.diagonal().setZero();
    if (off.norm() < 1e-14) {
        std::vector<int> s(static_cast<size_t>(d));
        for (Index i = 0; i < d; ++i) s[static_cast<size_t>(i)] = G(i, i).real() > 0 ? 1 : -1;
        out.basis = Mat::Identity(d, d);
        out.grading = Grading(s);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (G + G.adjoint()));
    // eigenvalues ascending (-1 first); put + first
    std::vector<Index> order;
    for (Index i = d - 1; i >= 0; --i) order.push_back(i);
    out.basis = Mat(d, d);
    std::vector<int> s;
    for (Index c = 0; c < d; ++c) {
        out.basis.col(c) = es.eigenvectors().col(order[static_cast<size_t>(c)]);
        s.push_back(es.eigenvalues()(order[static_cast<size_t>(c)]) > 0 ? 1 : -1);
    }
    out.grading = Grading(s);
    return out;
}

Mat cylinder_clifford(const Grading& grading) {
    Mat g = Mat::Zero(grading.dim(), grading.dim());
    for (Index i = 0; i < grading.dim(); ++i) g(i, i) = grading.signs()[static_cast<size_t>(i)] > 0 ? I_unit : -I_unit;
    return g;
}

}  // namespace z2
