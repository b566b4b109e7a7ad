#include "z2index/spectra.hpp"

#include "lapack.hpp"
#include "structured.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace z2 {

void KernelPolicy::validate() const {
    if (!(atol > 0.0) || !(rtol > 0.0) || !(gapMin >= 1.0))
        throw InvalidParameter("kernel policy requires atol, rtol > 0 and gapMin >= 1");
}

std::vector<double> singular_values(const Mat& D) { return lapack::svd_values(D); }

std::vector<double> singular_values(const SpMat& D) {
    auto spec = detail::component_spectra(D);
    std::vector<double> all;
    all.reserve(static_cast<size_t>(D.cols()));
    for (const auto& v : spec.values) all.insert(all.end(), v.begin(), v.end());
    std::sort(all.begin(), all.end());
    return all;
}

Cut kernel_cut(const std::vector<double>& s, const KernelPolicy& policy) {
    policy.validate();
    Cut cut;
    if (s.empty()) return cut;
    cut.sigmaMax = s.back();
    cut.threshold = std::max(policy.atol, policy.rtol * cut.sigmaMax);
    int k0 = 0;
    while (k0 < static_cast<int>(s.size()) && s[static_cast<size_t>(k0)] < cut.threshold) ++k0;
    if (k0 == 0) return cut;
    for (int k = k0; k >= 1; --k) {
        const double lo = s[static_cast<size_t>(k - 1)];
        const double hi = k < static_cast<int>(s.size()) ? s[static_cast<size_t>(k)]
                                                         : std::numeric_limits<double>::infinity();
        const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
        if (ratio >= policy.gapMin) {
            cut.k = k;
            cut.gap = ratio;
            return cut;
        }
    }
    std::ostringstream os;
    os << k0 << " values below threshold " << cut.threshold << " but no ratio reaches "
       << policy.gapMin << " (smallest values:";
    for (size_t i = 0; i < std::min<size_t>(s.size(), static_cast<size_t>(k0) + 2); ++i) os << ' ' << s[i];
    os << ')';
    throw AmbiguousKernel(os.str());
}

namespace {

SpectralReport report_from(const std::vector<double>& values, const KernelPolicy& policy) {
    SpectralReport r;
    r.singularValues = values;
    Cut cut = kernel_cut(values, policy);
    r.kernelDim = cut.k;
    r.detectionGap = cut.gap;
    r.threshold = cut.threshold;
    r.sigmaMax = cut.sigmaMax;
    r.gapMin = policy.gapMin;
    return r;
}

}  // namespace

SpectralReport kernel_dimension(const Mat& D, const KernelPolicy& policy) {
    // Right kernel: pad with zeros when the matrix is wide.
    std::vector<double> s = singular_values(D);
    while (static_cast<Index>(s.size()) < D.cols()) s.insert(s.begin(), 0.0);
    return report_from(s, policy);
}

SpectralReport kernel_dimension(const SpMat& D, const KernelPolicy& policy) {
    return report_from(singular_values(D), policy);
}

SpectralReport kernel_dimension(const DiscreteOperator& D, const KernelPolicy& policy) {
    return analyze_kernel(D, policy).report;
}

GapCertificate spectral_gap(const Mat& D, const KernelPolicy& policy) {
    SpectralReport r = kernel_dimension(D, policy);
    GapCertificate g;
    g.kernelDim = r.kernelDim;
    if (static_cast<size_t>(r.kernelDim) < r.singularValues.size())
        g.gamma = r.singularValues[static_cast<size_t>(r.kernelDim)];
    g.isolated = r.detectionGap >= policy.gapMin;
    return g;
}

GapCertificate spectral_gap(const DiscreteOperator& D, const KernelPolicy& policy) {
    SpectralReport r = analyze_kernel(D, policy).report;
    GapCertificate g;
    g.kernelDim = r.kernelDim;
    const size_t first = static_cast<size_t>(r.deflation.applied ? r.deflation.rawKernelDim : r.kernelDim);
    if (first < r.singularValues.size()) g.gamma = r.singularValues[first];
    g.isolated = r.detectionGap >= policy.gapMin;
    return g;
}

namespace {

StabilizationResult sweep_impl(const std::function<DiscreteOperator(int)>& builder,
                               const std::vector<int>& sizes,
                               const std::function<KernelPolicy(const DiscreteOperator&)>& policyFor) {
    if (sizes.size() < 3) throw InvalidParameter("stabilization_sweep needs at least 3 sizes");
    if (!std::is_sorted(sizes.begin(), sizes.end())) throw InvalidParameter("sizes must be ascending");
    StabilizationResult out;
    for (int n : sizes) {
        DiscreteOperator op = builder(n);
        SpectralReport rep = analyze_kernel(op, policyFor(op)).report;
        out.sizes.push_back(n);
        out.parities.push_back(z2_index(rep));
        out.reports.push_back(std::move(rep));
    }
    const size_t m = out.parities.size();
    if (out.parities[m - 1] != out.parities[m - 2] || out.parities[m - 2] != out.parities[m - 3]) {
        std::ostringstream os;
        os << "parities over the last three sizes disagree:";
        for (size_t i = m - 3; i < m; ++i) os << " n=" << out.sizes[i] << "->" << out.parities[i];
        throw Unstable(os.str());
    }
    out.parity = out.parities.back();
    return out;
}

}  // namespace

StabilizationResult stabilization_sweep(const std::function<DiscreteOperator(int)>& builder,
                                        const std::vector<int>& sizes, const KernelPolicy& policy) {
    return sweep_impl(builder, sizes, [&](const DiscreteOperator&) { return policy; });
}

StabilizationResult stabilization_sweep(const std::function<DiscreteOperator(int)>& builder,
                                        const std::vector<int>& sizes) {
    return sweep_impl(builder, sizes,
                      [](const DiscreteOperator& op) { return KernelPolicy::forModel(op.modelClass); });
}

RVec hermitian_eigenvalues(const Mat& H) { return lapack::heev_values(0.5 * (H + H.adjoint())); }

void hermitian_eigensystem(const Mat& H, RVec& values, Mat& vectors) {
    lapack::heev(0.5 * (H + H.adjoint()), values, vectors);
}

void svd_right(const Mat& D, std::vector<double>& values, Mat& V) { lapack::svd_full(D, values, V); }

void write_spectrum_csv(const std::string& path, const std::vector<double>& values) {
    std::ofstream f(path);
    if (!f) throw InvalidParameter("cannot write " + path);
    char buf[64];
    for (double v : values) {
        std::snprintf(buf, sizeof buf, "%.16e\n", v);
        f << buf;
    }
}

}  // namespace z2
