#include "z2index/callias.hpp"

#include "lapack.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace z2 {

namespace {

using RowSp = Eigen::SparseMatrix<cplx, Eigen::RowMajor, long>;

void require_node_major(const DiscreteOperator& D, const char* what) {
    if (D.fiberDim <= 0 || D.coords.empty() || D.cols() != Index(D.coords.size()) * D.fiberDim)
        throw DimensionMismatch(std::string(what) + ": operator has no node-major layout");
}

Mat sample(const Potential& phi, double x, Index fiberDim) {
    Mat p = phi.sampler(x);
    if (p.rows() != p.cols() || (p.rows() != 1 && p.rows() != fiberDim))
        throw DimensionMismatch("potential sample has the wrong size");
    if ((p - p.adjoint()).norm() > 1e-12 * std::max(1.0, p.norm()))
        throw SymmetryViolation("potential sample is not Hermitian");
    return p;
}

double min_square_eig(const Mat& p) {
    if (p.rows() == 1) return std::norm(p(0, 0));
    RVec ev = hermitian_eigenvalues(0.5 * (p + p.adjoint()));
    double m = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < ev.size(); ++i) m = std::min(m, ev(i) * ev(i));
    return m;
}

// Spectral norm of the rows [r0, r0+f) of a row-major sparse matrix.
double row_block_norm(const RowSp& C, Index r0, Index f) {
    std::vector<std::vector<std::pair<Index, cplx>>> rows(static_cast<size_t>(f));
    for (Index a = 0; a < f; ++a)
        for (RowSp::InnerIterator it(C, r0 + a); it; ++it)
            if (it.value() != cplx(0.0)) rows[static_cast<size_t>(a)].push_back({it.col(), it.value()});
    // Gram matrix G = R R^†; rows have disjoint supports in the common cases,
    // which makes G diagonal and the norm a max over row norms.
    Mat G = Mat::Zero(f, f);
    bool diagonal = true;
    for (Index a = 0; a < f; ++a)
        for (Index b = a; b < f; ++b) {
            const auto& ra = rows[static_cast<size_t>(a)];
            const auto& rb = rows[static_cast<size_t>(b)];
            cplx s = 0.0;
            size_t i = 0, j = 0;
            while (i < ra.size() && j < rb.size()) {
                if (ra[i].first < rb[j].first)
                    ++i;
                else if (ra[i].first > rb[j].first)
                    ++j;
                else {
                    s += ra[i].second * std::conj(rb[j].second);
                    ++i;
                    ++j;
                }
            }
            G(a, b) = s;
            G(b, a) = std::conj(s);
            if (a != b && s != cplx(0.0)) diagonal = false;
        }
    if (diagonal) {
        double m = 0.0;
        for (Index a = 0; a < f; ++a) m = std::max(m, G(a, a).real());
        return std::sqrt(m);
    }
    RVec ev = hermitian_eigenvalues(G);
    return std::sqrt(std::max(0.0, ev(ev.size() - 1)));
}

}  // namespace

SpMat potential_matrix(const DiscreteOperator& D, const Potential& phi) {
    require_node_major(D, "potential_matrix");
    const Index f = D.fiberDim;
    std::vector<Triplet> t;
    for (size_t j = 0; j < D.coords.size(); ++j) {
        Mat p = sample(phi, D.coords[j], f);
        const Index base = Index(j) * f;
        if (p.rows() == 1) {
            if (p(0, 0) != cplx(0.0))
                for (Index a = 0; a < f; ++a) t.emplace_back(base + a, base + a, p(0, 0));
        } else {
            for (Index a = 0; a < f; ++a)
                for (Index b = 0; b < f; ++b)
                    if (p(a, b) != cplx(0.0)) t.emplace_back(base + a, base + b, p(a, b));
        }
    }
    SpMat P(D.rows(), D.cols());
    P.setFromTriplets(t.begin(), t.end());
    return P;
}

std::vector<Index> nodes_outside(const DiscreteOperator& D, double radius) {
    std::vector<Index> out;
    for (size_t j = 0; j < D.coords.size(); ++j)
        if (std::abs(D.coords[j]) > radius) out.push_back(Index(j));
    return out;
}

MarginReport admissibility_margin(const DiscreteOperator& D, const Potential& phi,
                                  const std::vector<Index>& outsideNodes) {
    require_node_major(D, "admissibility_margin");
    if (D.rows() != D.cols()) throw DimensionMismatch("admissibility_margin: D must be square");
    const Index f = D.fiberDim;
    const SpMat P = potential_matrix(D, phi);
    RowSp C = SpMat(D.matrix * P - P * D.matrix);
    C.prune(cplx(0.0), 0.0);
    MarginReport rep;
    rep.margin = std::numeric_limits<double>::infinity();
    for (Index j : outsideNodes) {
        if (j < 0 || j >= D.nodes()) throw InvalidParameter("admissibility_margin: node out of range");
        const double x = D.coords[static_cast<size_t>(j)];
        const double m = min_square_eig(sample(phi, x, f)) - row_block_norm(C, j * f, f);
        if (m < rep.margin) {
            rep.margin = m;
            rep.worstNode = j;
            rep.worstCoord = x;
        }
    }
    if (outsideNodes.empty()) rep.margin = std::numeric_limits<double>::infinity();
    if (!(rep.margin > 0.0)) {
        std::ostringstream os;
        os << "margin " << rep.margin << " at node " << rep.worstNode << " (coordinate " << rep.worstCoord << ")";
        throw NotAdmissible(os.str());
    }
    return rep;
}

Potential certify_potential(const DiscreteOperator& D, Potential phi) {
    phi.margin = admissibility_margin(D, phi, nodes_outside(D, phi.essentialRadius)).margin;
    return phi;
}

DiscreteOperator build_callias_ungraded(const DiscreteOperator& D, const Potential& phi, const AntiUnitary& tau,
                                        const std::string& name, double symmetryTol) {
    if (D.rows() != D.cols() || D.cols() != tau.dim()) throw DimensionMismatch("build_callias_ungraded: sizes");
    admissibility_margin(D, phi, nodes_outside(D, phi.essentialRadius));
    SpMat B = D.matrix + I_unit * potential_matrix(D, phi);
    B.prune(cplx(0.0), 0.0);
    const double res = check_odd_symmetric(B, tau);
    if (res > symmetryTol) {
        std::ostringstream os;
        os << name << ": D + i Phi is not odd symmetric, residual " << res;
        throw SymmetryViolation(os.str());
    }
    DiscreteOperator out = D.withMatrix(B, name);
    out.modelClass = D.modelClass;
    return out;
}

std::pair<DiscreteOperator, AntiUnitary> graded_double(const DiscreteOperator& B, const AntiUnitary& tau) {
    if (B.rows() != B.cols() || B.cols() != tau.dim()) throw DimensionMismatch("graded_double: sizes");
    const Index n = B.cols();
    SpMat Bh = B.matrix.adjoint();
    std::vector<Triplet> t;
    for (Index j = 0; j < n; ++j) {
        for (SpMat::InnerIterator it(B.matrix, j); it; ++it) t.emplace_back(n + it.row(), j, it.value());
        for (SpMat::InnerIterator it(Bh, j); it; ++it) t.emplace_back(it.row(), n + j, it.value());
    }
    DiscreteOperator out;
    out.name = B.name + "_graded";
    out.matrix.resize(2 * n, 2 * n);
    out.matrix.setFromTriplets(t.begin(), t.end());
    out.modelClass = B.modelClass;
    if (B.hasArtifactWeight()) out.artifactWeight = kron(sparse_identity(2), B.artifactWeight);
    // tau ⊕ tau would need J conj(B) J^† = B; the swap [[0, J], [J, 0]] needs B^†, which is what B satisfies
    std::vector<Triplet> jt;
    for (Index j = 0; j < n; ++j)
        for (SpMat::InnerIterator it(tau.J(), j); it; ++it) {
            jt.emplace_back(it.row(), n + j, it.value());
            jt.emplace_back(n + it.row(), j, it.value());
        }
    SpMat J2(2 * n, 2 * n);
    J2.setFromTriplets(jt.begin(), jt.end());
    return {out, AntiUnitary(J2)};
}

BoundaryReduction boundary_reduction(const std::vector<Mat>& phiAtNodes, const std::vector<Mat>& gammaAtNodes,
                                     const SpMat& hypersurfaceDirac, double tol) {
    if (phiAtNodes.empty() || phiAtNodes.size() != gammaAtNodes.size())
        throw DimensionMismatch("boundary_reduction: need one Phi and one gamma per node");
    const Index k = phiAtNodes[0].rows();
    const Index nodes = Index(phiAtNodes.size());
    const Index total = nodes * k;
    if (hypersurfaceDirac.size() != 0 && (hypersurfaceDirac.rows() != total || hypersurfaceDirac.cols() != total))
        throw DimensionMismatch("boundary_reduction: hypersurface operator size");

    BoundaryReduction out;
    std::vector<Vec> plusFrame, minusFrame;
    for (Index x = 0; x < nodes; ++x) {
        const Mat& phi = phiAtNodes[static_cast<size_t>(x)];
        const Mat& gamma = gammaAtNodes[static_cast<size_t>(x)];
        if (phi.rows() != k || phi.cols() != k || gamma.rows() != k || gamma.cols() != k)
            throw DimensionMismatch("boundary_reduction: fiber sizes differ");
        RVec ev;
        Mat U;
        lapack::heev(0.5 * (phi + phi.adjoint()), ev, U);
        for (Index i = 0; i < k; ++i)
            if (std::abs(ev(i)) <= tol) {
                std::ostringstream os;
                os << "Phi has eigenvalue " << ev(i) << " at hypersurface node " << x;
                throw SingularPotential(os.str());
            }
        std::vector<Index> pos;
        for (Index i = 0; i < k; ++i)
            if (ev(i) > 0) pos.push_back(i);
        Mat Vp(k, Index(pos.size()));
        for (size_t i = 0; i < pos.size(); ++i) Vp.col(Index(i)) = U.col(pos[i]);
        Mat Pp = Vp * Vp.adjoint();
        out.projPlus.push_back(Pp);
        out.projMinus.push_back(Mat::Identity(k, k) - Pp);

        const Mat alpha = -I_unit * gamma;
        if ((alpha * alpha - Mat::Identity(k, k)).norm() > 1e-10 || (alpha - alpha.adjoint()).norm() > 1e-10)
            throw CliffordViolation("-i gamma is not a Hermitian involution");
        if ((Pp * alpha - alpha * Pp).norm() > 1e-10)
            throw SymmetryViolation("spectral projection of Phi does not commute with -i gamma");
        if (Vp.cols() == 0) continue;
        RVec aev;
        Mat W;
        lapack::heev(Vp.adjoint() * alpha * Vp, aev, W);
        Mat frame = Vp * W;
        for (Index i = frame.cols() - 1; i >= 0; --i) {
            Vec g = Vec::Zero(total);
            g.segment(x * k, k) = frame.col(i);
            (aev(i) > 0 ? plusFrame : minusFrame).push_back(g);
        }
    }
    const Index np = Index(plusFrame.size()), nm = Index(minusFrame.size());
    out.basis = Mat(total, np + nm);
    for (Index i = 0; i < np; ++i) out.basis.col(i) = plusFrame[static_cast<size_t>(i)];
    for (Index i = 0; i < nm; ++i) out.basis.col(np + i) = minusFrame[static_cast<size_t>(i)];
    out.alpha = Grading::fromDims(np, nm);

    Mat reduced = Mat::Zero(np + nm, np + nm);
    if (hypersurfaceDirac.size() != 0) reduced = out.basis.adjoint() * (hypersurfaceDirac * out.basis);
    out.reducedOperator.name = "reduced_hypersurface";
    out.reducedOperator.matrix = to_sparse(reduced, 1e-14);
    out.reducedOperator.modelClass = ModelClass::Exact;
    out.reducedPlus.name = "reduced_hypersurface_plus";
    out.reducedPlus.matrix = to_sparse(reduced.block(np, 0, nm, np), 1e-14);
    out.reducedPlus.modelClass = ModelClass::Exact;
    return out;
}

double model_sign_profile(double r) { return std::tanh(3.0 * r); }

CylinderDirac cylinder_dirac(const DiscreteOperator& DN, const Grading& grading, const AntiUnitary& tauN,
                             const Grid1D& grid, double wilson, double boundaryLayer) {
    const Index F = DN.cols();
    if (DN.rows() != F || grading.dim() != F || tauN.dim() != F)
        throw DimensionMismatch("cylinder_dirac: D_N, grading and tau sizes differ");
    if (grid.periodic()) throw InvalidParameter("cylinder_dirac needs a non-periodic r-grid");
    if (frobenius(SpMat(DN.matrix - SpMat(DN.matrix.adjoint()))) > 1e-12 * std::max(1.0, frobenius(DN.matrix)))
        throw SymmetryViolation("D_N is not Hermitian");
    if (frobenius(grading.block(DN.matrix, 1, 1)) + frobenius(grading.block(DN.matrix, -1, -1)) > 1e-12)
        throw SymmetryViolation("D_N is not odd with respect to its grading");
    const Index n = grid.points();
    const double h = grid.h();
    std::vector<Triplet> t;
    t.reserve(static_cast<size_t>(n * (DN.matrix.nonZeros() + 5 * F)));
    for (Index j = 0; j < n; ++j) {
        const Index base = j * F;
        for (Index c = 0; c < F; ++c)
            for (SpMat::InnerIterator it(DN.matrix, c); it; ++it) t.emplace_back(base + it.row(), base + c, it.value());
        for (Index a = 0; a < F; ++a) {
            const cplx g = grading.signs()[static_cast<size_t>(a)] > 0 ? I_unit : -I_unit;
            const cplx wil = I_unit * (wilson * h / 2.0) / (h * h);
            t.emplace_back(base + a, base + a, -2.0 * wil);
            if (j + 1 < n) t.emplace_back(base + a, base + F + a, g / (2.0 * h) + wil);
            if (j > 0) t.emplace_back(base + a, base - F + a, -g / (2.0 * h) + wil);
        }
    }
    CylinderDirac out{DiscreteOperator{}, AntiUnitary(kron(sparse_identity(n), tauN.J())), grid};
    out.op.name = "cylinder_dirac";
    out.op.matrix.resize(n * F, n * F);
    out.op.matrix.setFromTriplets(t.begin(), t.end());
    out.op.matrix.prune(cplx(0.0), 0.0);
    out.op.modelClass = ModelClass::FiniteDifference;
    out.op.coords = grid.coords();
    out.op.fiberDim = F;
    out.op.artifactWeight = boundary_layer_weight(out.op.coords, F, grid.halfLength() - boundaryLayer);
    return out;
}

ModelOperator build_model_operator(const DiscreteOperator& DN, const Grading& grading, const AntiUnitary& tauN,
                                   const Grid1D& grid, int sign, double lambda, double wilson) {
    if (sign != 1 && sign != -1) throw InvalidParameter("model operator sign must be +1 or -1");
    if (!(lambda > 0.0)) throw InvalidParameter("potential scale must be positive");
    CylinderDirac cyl = cylinder_dirac(DN, grading, tauN, grid, wilson);
    Potential phi;
    phi.sampler = [sign, lambda](double r) { return Mat::Constant(1, 1, double(sign) * lambda * model_sign_profile(r)); };
    phi.essentialRadius = 0.5;
    ModelOperator out{DiscreteOperator{}, cyl.tau, {}};
    out.margin = admissibility_margin(cyl.op, phi, nodes_outside(cyl.op, phi.essentialRadius));
    out.op = build_callias_ungraded(cyl.op, phi, cyl.tau, sign > 0 ? "model_M_plus" : "model_M_minus");
    return out;
}

std::pair<DiscreteOperator, DiscreteOperator> cut_and_paste(const DiscreteOperator& op0, const DiscreteOperator& op1,
                                                            double cut, const AntiUnitary& tau, Index window,
                                                            double tol) {
    require_node_major(op0, "cut_and_paste");
    require_node_major(op1, "cut_and_paste");
    if (op0.rows() != op1.rows() || op0.cols() != op1.cols() || op0.fiberDim != op1.fiberDim ||
        op0.coords != op1.coords)
        throw DimensionMismatch("cut_and_paste: operators live on different grids");
    if (op0.cols() != tau.dim()) throw DimensionMismatch("cut_and_paste: tau size");
    if (!(cut > 0.0)) throw InvalidParameter("cut must be positive (the cut pair is {-cut, cut})");
    const Index f = op0.fiberDim;
    const Index nodes = op0.nodes();
    RowSp A0 = op0.matrix, A1 = op1.matrix;

    // Window around each cut node: every row in it must coincide.
    for (double c : {-cut, cut}) {
        Index jc = 0;
        for (Index j = 1; j < nodes; ++j)
            if (std::abs(op0.coords[size_t(j)] - c) < std::abs(op0.coords[size_t(jc)] - c)) jc = j;
        const Index lo = std::max<Index>(0, jc - window / 2), hi = std::min<Index>(nodes - 1, jc + window / 2);
        for (Index j = lo; j <= hi; ++j)
            for (Index a = 0; a < f; ++a) {
                const Index r = j * f + a;
                Eigen::SparseVector<cplx, Eigen::RowMajor, long> d = A0.row(r) - A1.row(r);
                double m = 0.0;
                for (Eigen::SparseVector<cplx, Eigen::RowMajor, long>::InnerIterator it(d); it; ++it)
                    m = std::max(m, std::abs(it.value()));
                if (m > tol) {
                    std::ostringstream os;
                    os << "rows differ by " << m << " at node " << j << " (coordinate " << op0.coords[size_t(j)]
                       << ") inside the cut window";
                    throw MismatchAtCut(os.str());
                }
            }
    }

    auto splice = [&](const RowSp& inside, const RowSp& outside, const std::string& name) {
        std::vector<Triplet> t;
        for (Index j = 0; j < nodes; ++j) {
            const RowSp& src = std::abs(op0.coords[size_t(j)]) < cut ? inside : outside;
            for (Index a = 0; a < f; ++a)
                for (RowSp::InnerIterator it(src, j * f + a); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
        }
        SpMat M(op0.rows(), op0.cols());
        M.setFromTriplets(t.begin(), t.end());
        DiscreteOperator out = op0.withMatrix(M, name);
        const double res = check_odd_symmetric(M, tau);
        if (res > 1e-10) {
            std::ostringstream os;
            os << name << " is not odd symmetric after surgery, residual " << res;
            throw SymmetryViolation(os.str());
        }
        return out;
    };
    return {splice(A0, A1, op0.name + "|" + op1.name), splice(A1, A0, op1.name + "|" + op0.name)};
}

}  // namespace z2
