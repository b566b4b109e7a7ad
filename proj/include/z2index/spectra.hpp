#pragma once

#include "z2index/operator.hpp"
#include "z2index/quaternionic.hpp"

#include <functional>
#include <limits>

namespace z2 {

struct KernelPolicy {
    double atol = 1e-10;
    double rtol = 1e-9;
    double gapMin = 100.0;

    static KernelPolicy exact() { return {1e-10, 1e-9, 100.0}; }
    static KernelPolicy finiteDifference() { return {1e-10, 1e-6, 100.0}; }
    static KernelPolicy forModel(ModelClass c) {
        return c == ModelClass::Exact ? exact() : finiteDifference();
    }
    void validate() const;
};

struct GapCertificate {
    int kernelDim = 0;
    double gamma = std::numeric_limits<double>::infinity();
    bool isolated = true;
};

// Outcome of the kernel cut, optionally with near-null right vectors.
struct KernelAnalysis {
    SpectralReport report;
    Mat rawBasis;       // orthonormal basis of the raw near-null right singular space
    Mat physicalBasis;  // columns of rawBasis combinations with artifact weight < 0.1
    Mat artifactBasis;
};

struct AnalysisOptions {
    bool wantBasis = false;
    bool deflate = true;  // use the operator's artifact weight when present
    double physicalMax = 0.1;
    double artifactMin = 0.9;
};

// Singular values of a general m x n matrix (min(m,n) values), ascending.
std::vector<double> singular_values(const Mat& D);
// Right singular spectrum of a sparse operator: sqrt(eig(D^† D)), n values.
std::vector<double> singular_values(const SpMat& D);

SpectralReport kernel_dimension(const Mat& D, const KernelPolicy& policy);
SpectralReport kernel_dimension(const SpMat& D, const KernelPolicy& policy);
SpectralReport kernel_dimension(const DiscreteOperator& D, const KernelPolicy& policy);

KernelAnalysis analyze_kernel(const DiscreteOperator& D, const KernelPolicy& policy,
                              const AnalysisOptions& opts = {});

GapCertificate spectral_gap(const Mat& D, const KernelPolicy& policy);
GapCertificate spectral_gap(const DiscreteOperator& D, const KernelPolicy& policy);

// Applies the cut rule to an ascending list. Returns k and the detection gap;
// throws AmbiguousKernel when values sit below threshold without a clean gap.
struct Cut {
    int k = 0;
    double gap = std::numeric_limits<double>::infinity();
    double threshold = 0.0;
    double sigmaMax = 0.0;
};
Cut kernel_cut(const std::vector<double>& ascending, const KernelPolicy& policy);

struct StabilizationResult {
    int parity = 0;
    std::vector<int> sizes;
    std::vector<int> parities;
    std::vector<SpectralReport> reports;
};

// Parity common to the last three sizes; throws Unstable if they disagree.
StabilizationResult stabilization_sweep(const std::function<DiscreteOperator(int)>& builder,
                                        const std::vector<int>& sizes,
                                        const KernelPolicy& policy);
StabilizationResult stabilization_sweep(const std::function<DiscreteOperator(int)>& builder,
                                        const std::vector<int>& sizes);  // policy from model class

// Hermitian eigenvalues (ascending) and optional eigenvectors, dense LAPACK.
RVec hermitian_eigenvalues(const Mat& H);
void hermitian_eigensystem(const Mat& H, RVec& values, Mat& vectors);

// Dense SVD with full right singular vectors; values ascending, V columns matched.
void svd_right(const Mat& D, std::vector<double>& values, Mat& V);

// One value per line, 17 significant digits, scientific notation.
void write_spectrum_csv(const std::string& path, const std::vector<double>& values);

}  // namespace z2
