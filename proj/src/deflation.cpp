// Kernel analysis with artifact deflation.
//
// A finite square section of an odd symmetric operator has J*conj(D)
// complex antisymmetric up to the unitary J, so its singular values pair up
// and dim ker is always even for ungraded sections. On a truncated
// noncompact geometry the partner of each physical zero mode is a mode
// pinned to the truncation (boundary layer, lattice doubler, angular
// momentum cutoff). The builder marks that region with a weight W; the
// near-null right singular space V is split by the eigenvalues of V^† W V
// into physical (< physicalMax) and artifact (> artifactMin) directions.
// Anything in between is refused as AmbiguousKernel.

#include "z2index/spectra.hpp"

#include "lapack.hpp"
#include "structured.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace z2 {

KernelAnalysis analyze_kernel(const DiscreteOperator& op, const KernelPolicy& policy,
                              const AnalysisOptions& opts) {
    const SpMat& D = op.matrix;
    auto spec = detail::component_spectra(D);

    struct Tagged {
        double v;
        size_t comp;
    };
    std::vector<Tagged> all;
    all.reserve(static_cast<size_t>(D.cols()));
    for (size_t k = 0; k < spec.values.size(); ++k)
        for (double v : spec.values[k]) all.push_back({v, k});
    std::stable_sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) { return a.v < b.v; });
    std::vector<double> values(all.size());
    for (size_t i = 0; i < all.size(); ++i) values[i] = all[i].v;

    KernelAnalysis out;
    SpectralReport& rep = out.report;
    Cut cut = kernel_cut(values, policy);
    rep.singularValues = values;
    rep.kernelDim = cut.k;
    rep.detectionGap = cut.gap;
    rep.threshold = cut.threshold;
    rep.sigmaMax = cut.sigmaMax;
    rep.gapMin = policy.gapMin;

    const bool deflate = opts.deflate && op.hasArtifactWeight() && cut.k > 0;
    if (!deflate && !opts.wantBasis) return out;
    out.rawBasis = Mat(D.cols(), cut.k);
    out.physicalBasis = Mat(D.cols(), 0);
    out.artifactBasis = Mat(D.cols(), 0);
    if (cut.k == 0) return out;

    const double clusterMax = values[static_cast<size_t>(cut.k - 1)];
    const double next = static_cast<size_t>(cut.k) < values.size() ? values[static_cast<size_t>(cut.k)]
                                                                   : std::numeric_limits<double>::infinity();
    std::vector<int> perComp(spec.values.size(), 0);
    for (int i = 0; i < cut.k; ++i) ++perComp[all[static_cast<size_t>(i)].comp];
    Mat V = Mat::Zero(D.cols(), cut.k);
    Index col = 0;
    for (size_t k = 0; k < perComp.size(); ++k) {
        if (perComp[k] == 0) continue;
        const auto& c = spec.components[k];
        Mat local = detail::component_null_vectors(c, spec.plans[k], perComp[k], clusterMax, next);
        for (Index j = 0; j < local.cols(); ++j, ++col)
            for (size_t a = 0; a < c.cols.size(); ++a) V(c.cols[a], col) = local(static_cast<Index>(a), j);
    }
    out.rawBasis = V;
    if (!deflate) {
        out.physicalBasis = V;
        return out;
    }

    Mat WV = op.artifactWeight * V;
    Mat C = V.adjoint() * WV;
    RVec w;
    Mat Q;
    lapack::heev(0.5 * (C + C.adjoint()), w, Q);
    DeflationInfo& info = rep.deflation;
    info.applied = true;
    info.rawKernelDim = cut.k;
    std::vector<Index> phys, art;
    for (Index i = 0; i < w.size(); ++i) {
        info.weights.push_back(w(i));
        if (w(i) < opts.physicalMax)
            phys.push_back(i);
        else if (w(i) > opts.artifactMin)
            art.push_back(i);
    }
    if (phys.size() + art.size() != static_cast<size_t>(w.size())) {
        std::ostringstream os;
        os << "near-null directions do not separate into physical and artifact modes, weights:";
        for (Index i = 0; i < w.size(); ++i) os << ' ' << w(i);
        throw AmbiguousKernel(os.str());
    }
    out.physicalBasis = Mat(D.cols(), static_cast<Index>(phys.size()));
    out.artifactBasis = Mat(D.cols(), static_cast<Index>(art.size()));
    for (size_t j = 0; j < phys.size(); ++j) out.physicalBasis.col(static_cast<Index>(j)) = V * Q.col(phys[j]);
    for (size_t j = 0; j < art.size(); ++j) out.artifactBasis.col(static_cast<Index>(j)) = V * Q.col(art[j]);
    for (Index j = 0; j < out.physicalBasis.cols(); ++j) {
        Vec Dv = D * out.physicalBasis.col(j);
        info.physicalResiduals.push_back(Dv.norm());
    }
    std::sort(info.physicalResiduals.begin(), info.physicalResiduals.end());
    info.artifactDim = static_cast<int>(art.size());
    rep.kernelDim = static_cast<int>(phys.size());
    return out;
}

}  // namespace z2
