#include "z2index/quaternionic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace z2 {

namespace {

SpMat antisymmetrize(const SpMat& J) {
    SpMat Jt = J.transpose();
    SpMat out = 0.5 * (J - Jt);
    out.prune(cplx(0.0, 0.0), 0.0);
    return out;
}

}  // namespace

Index checked_even(Index n) {
    if (n <= 0 || n % 2 != 0)
        throw DimensionMismatch("quaternionic dimension must be positive and even, got " +
                                std::to_string(n));
    return n;
}

AntiUnitary::AntiUnitary(const SpMat& J, double unitaryTol) {
    if (J.rows() != J.cols()) throw DimensionMismatch("J must be square");
    checked_even(J.rows());
    J_ = antisymmetrize(J);
    J_.makeCompressed();
    const double r = unitarityResidual();
    if (!(r <= unitaryTol)) {
        std::ostringstream os;
        os << "J is not unitary, ||J^†J - I||_F = " << r;
        throw SymmetryViolation(os.str());
    }
}

AntiUnitary::AntiUnitary(const Mat& J, double unitaryTol) : AntiUnitary(to_sparse(J), unitaryTol) {}

double AntiUnitary::unitarityResidual() const {
    SpMat p = J_.adjoint() * J_;
    p -= sparse_identity(J_.rows());
    return frobenius(p);
}

double AntiUnitary::antisymmetryResidual() const {
    SpMat s = J_ + SpMat(J_.transpose());
    return frobenius(s);
}

AntiUnitary AntiUnitary::restrictTo(const Mat& basis, double invarianceTol) const {
    if (basis.rows() != dim()) throw DimensionMismatch("basis rows differ from tau dimension");
    Mat tauB = J_ * basis.conjugate();
    Mat JB = basis.adjoint() * tauB;
    const double leak = (tauB - basis * JB).norm();
    if (leak > invarianceTol * std::max(1.0, std::sqrt(double(basis.cols())))) {
        std::ostringstream os;
        os << "subspace is not tau-invariant, leak " << leak;
        throw SymmetryViolation(os.str());
    }
    Eigen::JacobiSVD<Mat> svd(JB, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat polar = svd.matrixU() * svd.matrixV().adjoint();
    return AntiUnitary(Mat(0.5 * (polar - polar.transpose())));
}

AntiUnitary AntiUnitary::directSum(const AntiUnitary& a, const AntiUnitary& b) {
    std::vector<Triplet> t;
    for (Index j = 0; j < a.J().outerSize(); ++j)
        for (SpMat::InnerIterator it(a.J(), j); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
    const Index off = a.dim();
    for (Index j = 0; j < b.J().outerSize(); ++j)
        for (SpMat::InnerIterator it(b.J(), j); it; ++it)
            t.emplace_back(off + it.row(), off + it.col(), it.value());
    SpMat J(a.dim() + b.dim(), a.dim() + b.dim());
    J.setFromTriplets(t.begin(), t.end());
    return AntiUnitary(J);
}

Grading::Grading(std::vector<int> signs) : signs_(std::move(signs)) {
    for (int s : signs_) {
        if (s == 1)
            ++plusDim_;
        else if (s == -1)
            ++minusDim_;
        else
            throw DimensionMismatch("grading signs must be +1 or -1");
    }
}

Grading Grading::fromDims(Index plusDim, Index minusDim) {
    std::vector<int> s(static_cast<size_t>(plusDim), 1);
    s.insert(s.end(), static_cast<size_t>(minusDim), -1);
    return Grading(std::move(s));
}

std::vector<Index> Grading::plusIndices() const {
    std::vector<Index> out;
    for (size_t i = 0; i < signs_.size(); ++i)
        if (signs_[i] == 1) out.push_back(static_cast<Index>(i));
    return out;
}

std::vector<Index> Grading::minusIndices() const {
    std::vector<Index> out;
    for (size_t i = 0; i < signs_.size(); ++i)
        if (signs_[i] == -1) out.push_back(static_cast<Index>(i));
    return out;
}

SpMat Grading::involution() const {
    SpMat g(dim(), dim());
    std::vector<Triplet> t;
    for (Index i = 0; i < dim(); ++i) t.emplace_back(i, i, double(signs_[static_cast<size_t>(i)]));
    g.setFromTriplets(t.begin(), t.end());
    return g;
}

SpMat Grading::block(const SpMat& A, int to, int from) const {
    if (A.rows() != dim() || A.cols() != dim()) throw DimensionMismatch("grading block: size");
    std::vector<Index> rowPos(static_cast<size_t>(dim()), -1), colPos(static_cast<size_t>(dim()), -1);
    Index nr = 0, nc = 0;
    for (Index i = 0; i < dim(); ++i) {
        if (signs_[static_cast<size_t>(i)] == to) rowPos[static_cast<size_t>(i)] = nr++;
        if (signs_[static_cast<size_t>(i)] == from) colPos[static_cast<size_t>(i)] = nc++;
    }
    std::vector<Triplet> t;
    for (Index j = 0; j < A.outerSize(); ++j)
        for (SpMat::InnerIterator it(A, j); it; ++it) {
            Index r = rowPos[static_cast<size_t>(it.row())], c = colPos[static_cast<size_t>(it.col())];
            if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
        }
    SpMat out(nr, nc);
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

std::vector<double> SpectralReport::deflatedValues() const {
    if (!deflation.applied) return singularValues;
    std::vector<double> out = deflation.physicalResiduals;
    const size_t start = static_cast<size_t>(deflation.rawKernelDim);
    for (size_t i = start; i < singularValues.size(); ++i) out.push_back(singularValues[i]);
    std::sort(out.begin(), out.end());
    return out;
}

AntiUnitary make_standard_J(Index n) {
    if (n <= 0) throw DimensionMismatch("make_standard_J: n must be positive");
    std::vector<Triplet> t;
    for (Index i = 0; i < n; ++i) {
        t.emplace_back(i, n + i, 1.0);
        t.emplace_back(n + i, i, -1.0);
    }
    SpMat J(2 * n, 2 * n);
    J.setFromTriplets(t.begin(), t.end());
    return AntiUnitary(J);
}

Vec apply_tau(const AntiUnitary& tau, const Vec& v) {
    if (v.size() != tau.dim()) throw DimensionMismatch("apply_tau: vector size");
    return tau.J() * v.conjugate();
}

double check_odd_symmetric(const SpMat& D, const AntiUnitary& tau) {
    if (D.rows() != D.cols()) throw DimensionMismatch("check_odd_symmetric: D must be square");
    if (D.rows() != tau.dim()) throw DimensionMismatch("check_odd_symmetric: D and tau sizes differ");
    // J^{-1} = J^† = -conj(J) for unitary antisymmetric J.
    SpMat Jinv = tau.J().adjoint();
    SpMat lhs = tau.J() * SpMat(D.conjugate()) * Jinv;
    SpMat diff = lhs - SpMat(D.adjoint());
    return frobenius(diff) / std::max(1.0, frobenius(D));
}

double check_odd_symmetric(const Mat& D, const AntiUnitary& tau) {
    if (D.rows() != D.cols()) throw DimensionMismatch("check_odd_symmetric: D must be square");
    if (D.rows() != tau.dim()) throw DimensionMismatch("check_odd_symmetric: D and tau sizes differ");
    Mat J = tau.denseJ();
    Mat diff = J * D.conjugate() * J.adjoint() - D.adjoint();
    return diff.norm() / std::max(1.0, D.norm());
}

// (J conj(A) J^{-1})^† = J A^T J^{-1}, a linear involution whose fixed points
// are exactly the odd symmetric matrices.
Mat symmetrize_odd(const Mat& A, const AntiUnitary& tau) {
    if (A.rows() != A.cols() || A.rows() != tau.dim())
        throw DimensionMismatch("symmetrize_odd: size");
    Mat J = tau.denseJ();
    return 0.5 * (A + J * A.transpose() * J.adjoint());
}

SpMat symmetrize_odd(const SpMat& A, const AntiUnitary& tau) {
    if (A.rows() != A.cols() || A.rows() != tau.dim())
        throw DimensionMismatch("symmetrize_odd: size");
    SpMat At = A.transpose();
    SpMat Jinv = tau.J().adjoint();
    SpMat img = tau.J() * At * Jinv;
    SpMat out = 0.5 * (A + img);
    out.prune(cplx(0.0, 0.0), 0.0);
    return out;
}

int z2_index(const SpectralReport& report) {
    if (report.detectionGap < report.gapMin) {
        std::ostringstream os;
        os << "detection gap " << report.detectionGap << " below policy minimum " << report.gapMin;
        throw AmbiguousKernel(os.str());
    }
    return report.kernelDim % 2;
}

}  // namespace z2
