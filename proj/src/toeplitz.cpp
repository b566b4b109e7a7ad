#include "z2index/toeplitz.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace z2 {

SymbolReport check_symbol(const Symbol& sym, const std::vector<cplx>& baseNodes,
                          const std::function<cplx(cplx)>& theta, double tol) {
    SymbolReport rep;
    const Index k = sym.matrixSize;
    for (size_t i = 0; i < baseNodes.size(); ++i) {
        const cplx x = baseNodes[i];
        Mat f = sym.sampler(x);
        Mat ft = sym.sampler(theta(x));
        if (f.rows() != k || f.cols() != k || ft.rows() != k || ft.cols() != k)
            throw DimensionMismatch("symbol sample has the wrong size");
        const double r = (ft - f.adjoint()).norm();
        if (r > rep.symmetryResidual) {
            rep.symmetryResidual = r;
            rep.worstSymmetryNode = Index(i);
        }
        if (std::abs(x) > sym.invertibilityRadius) {
            Eigen::JacobiSVD<Mat> svd(f);
            const double smin = svd.singularValues()(k - 1);
            const double inv = smin > 0 ? 1.0 / smin : std::numeric_limits<double>::infinity();
            if (inv > rep.worstInverseNorm) {
                rep.worstInverseNorm = inv;
                rep.worstInverseNode = Index(i);
            }
        }
    }
    if (rep.symmetryResidual > tol) {
        std::ostringstream os;
        os << "f(theta x) differs from f(x)^† by " << rep.symmetryResidual << " at node "
           << baseNodes[size_t(rep.worstSymmetryNode)];
        throw SymmetryViolation(os.str());
    }
    if (rep.worstInverseNorm > sym.invertibilityBound) {
        std::ostringstream os;
        os << "||f^{-1}|| = " << rep.worstInverseNorm << " exceeds the bound " << sym.invertibilityBound
           << " at node " << baseNodes[size_t(rep.worstInverseNode)];
        throw NotInvertibleAtInfinity(os.str());
    }
    return rep;
}

KernelProjection certify_gap(const DiscreteOperator& D, const AntiUnitary& tau, const KernelPolicy& policy) {
    if (D.rows() != D.cols() || D.cols() != tau.dim()) throw DimensionMismatch("certify_gap: sizes");
    const double herm = frobenius(SpMat(D.matrix - SpMat(D.matrix.adjoint())));
    if (herm > 1e-10 * std::max(1.0, frobenius(D.matrix))) throw SymmetryViolation("certify_gap: D is not self-adjoint");
    const double odd = check_odd_symmetric(D.matrix, tau);
    if (odd > 1e-10) throw SymmetryViolation("certify_gap: D is not odd symmetric");

    KernelAnalysis a;
    try {
        AnalysisOptions opts;
        opts.wantBasis = true;
        a = analyze_kernel(D, policy, opts);
    } catch (const AmbiguousKernel& e) {
        throw NoGap(std::string("zero is not isolated: ") + e.what());
    }
    const SpectralReport& rep = a.report;
    if (rep.detectionGap < policy.gapMin) {
        std::ostringstream os;
        os << "gap ratio " << rep.detectionGap << " below " << policy.gapMin;
        throw NoGap(os.str());
    }
    KernelProjection out;
    out.basis = a.physicalBasis;
    out.gap.kernelDim = rep.kernelDim;
    const size_t raw = static_cast<size_t>(rep.deflation.applied ? rep.deflation.rawKernelDim : rep.kernelDim);
    out.gap.gamma = raw < rep.singularValues.size() ? rep.singularValues[raw] : std::numeric_limits<double>::infinity();
    out.gap.isolated = true;
    if (out.basis.cols() > 0) {
        if (out.basis.cols() % 2 != 0)
            throw NoGap("kernel of a self-adjoint odd symmetric operator has odd dimension; the cut is unreliable");
        out.tau = tau.restrictTo(out.basis);
    }
    return out;
}

ToeplitzMatrix compress(const KernelProjection& proj, const Mat& multiplication, const Mat& ambientWeight) {
    if (!proj.tau) throw DimensionMismatch("compress: empty kernel");
    const Mat& B = proj.basis;
    if (multiplication.rows() != B.rows() || multiplication.cols() != B.rows())
        throw DimensionMismatch("compress: multiplication operator does not act on the kernel's ambient space");
    ToeplitzMatrix out{B.adjoint() * multiplication * B, *proj.tau, Mat()};
    if (ambientWeight.size() != 0) {
        if (ambientWeight.rows() != B.rows()) throw DimensionMismatch("compress: weight size");
        out.artifactWeight = B.adjoint() * ambientWeight * B;
    }
    const double res = check_odd_symmetric(out.T, out.tau);
    if (res > 1e-10) {
        std::ostringstream os;
        os << "compressed Toeplitz matrix is not odd symmetric, residual " << res;
        throw SymmetryViolation(os.str());
    }
    return out;
}

ToeplitzMatrix compress(const KernelProjection& proj, const Symbol& sym, const std::vector<cplx>& nodes,
                        Index fiberDim, const Mat& ambientWeight) {
    const Index k = sym.matrixSize;
    const Index n = Index(nodes.size()) * fiberDim * k;
    if (proj.basis.rows() != n) throw DimensionMismatch("compress: basis does not match nodes x fiber x k");
    Mat M = Mat::Zero(n, n);
    for (size_t j = 0; j < nodes.size(); ++j) {
        Mat f = sym.sampler(nodes[j]);
        if (f.rows() != k || f.cols() != k) throw DimensionMismatch("symbol sample has the wrong size");
        for (Index e = 0; e < fiberDim; ++e) {
            const Index base = (Index(j) * fiberDim + e) * k;
            M.block(base, base, k, k) = f;
        }
    }
    return compress(proj, M, ambientWeight);
}

DiscreteOperator toeplitz_operator(const ToeplitzMatrix& T, const std::string& name) {
    DiscreteOperator op;
    op.name = name;
    op.matrix = to_sparse(T.T);
    op.modelClass = ModelClass::FiniteDifference;
    if (T.artifactWeight.size() != 0) op.artifactWeight = to_sparse(0.5 * (T.artifactWeight + T.artifactWeight.adjoint()), 1e-15);
    return op;
}

ToeplitzComparison toeplitz_vs_callias(const std::function<ToeplitzInstance(int)>& builder,
                                       const std::vector<int>& sizes, const KernelPolicy& policy) {
    std::map<int, ToeplitzInstance> cache;
    auto get = [&](int n) -> const ToeplitzInstance& {
        auto it = cache.find(n);
        if (it == cache.end()) it = cache.emplace(n, builder(n)).first;
        return it->second;
    };
    ToeplitzComparison out;
    out.toeplitzSweep = stabilization_sweep([&](int n) { return get(n).toeplitz; }, sizes, policy);
    out.calliasSweep = stabilization_sweep([&](int n) { return get(n).callias; }, sizes, policy);
    out.indTf = out.toeplitzSweep.parity;
    out.indC = out.calliasSweep.parity;
    out.agree = out.indTf == out.indC;
    return out;
}

}  // namespace z2
