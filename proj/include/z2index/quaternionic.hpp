#pragma once

#include "z2index/common.hpp"

#include <optional>
#include <utility>

namespace z2 {

// tau(x) = J * conj(x) with J unitary and antisymmetric, so tau^2 = -1 and
// tau^* = -tau hold by construction. J is kept sparse because the lattice
// and cylinder models have dimensions far beyond dense storage.
class AntiUnitary {
public:
    // J is antisymmetrized exactly ((J - J^T)/2) before the unitarity check.
    explicit AntiUnitary(const SpMat& J, double unitaryTol = 1e-12);
    explicit AntiUnitary(const Mat& J, double unitaryTol = 1e-12);

    const SpMat& J() const { return J_; }
    Mat denseJ() const { return to_dense(J_); }
    Index dim() const { return J_.rows(); }
    double unitarityResidual() const;
    double antisymmetryResidual() const;

    // tau restricted to the column span of an orthonormal basis B of a
    // tau-invariant subspace: J_B = B^† J conj(B), polished to the nearest
    // unitary before antisymmetrization.
    AntiUnitary restrictTo(const Mat& basis, double invarianceTol = 1e-8) const;

    // (tau_a ⊕ tau_b) on the direct sum.
    static AntiUnitary directSum(const AntiUnitary& a, const AntiUnitary& b);

private:
    SpMat J_;
};

class Grading {
public:
    Grading() = default;
    explicit Grading(std::vector<int> signs);
    static Grading fromDims(Index plusDim, Index minusDim);  // (+...+, -...-)

    const std::vector<int>& signs() const { return signs_; }
    Index plusDim() const { return plusDim_; }
    Index minusDim() const { return minusDim_; }
    Index dim() const { return static_cast<Index>(signs_.size()); }
    std::vector<Index> plusIndices() const;
    std::vector<Index> minusIndices() const;
    SpMat involution() const;

    // Block of A mapping the `from` eigenspace to the `to` eigenspace.
    SpMat block(const SpMat& A, int to, int from) const;

private:
    std::vector<int> signs_;
    Index plusDim_ = 0;
    Index minusDim_ = 0;
};

struct KramersCluster {
    double value = 0.0;
    int multiplicity = 0;
};

struct DeflationInfo {
    bool applied = false;
    int rawKernelDim = 0;
    int artifactDim = 0;
    std::vector<double> weights;            // eigenvalues of V^† W V, ascending
    std::vector<double> physicalResiduals;  // ||D v|| per physical direction
};

struct SpectralReport {
    std::vector<double> singularValues;  // ascending
    int kernelDim = 0;
    double detectionGap = 0.0;  // sigma_{k+1}/sigma_k at the raw cut; inf if k = 0 or sigma_k = 0
    double threshold = 0.0;
    double sigmaMax = 0.0;
    double gapMin = 100.0;
    std::optional<std::vector<KramersCluster>> kramersCertificate;
    DeflationInfo deflation;

    // Spectrum with the artifact directions removed from the near-null
    // cluster; the physical directions are represented by their residuals.
    std::vector<double> deflatedValues() const;
};

Index checked_even(Index n);

AntiUnitary make_standard_J(Index n);
Vec apply_tau(const AntiUnitary& tau, const Vec& v);
double check_odd_symmetric(const Mat& D, const AntiUnitary& tau);
double check_odd_symmetric(const SpMat& D, const AntiUnitary& tau);
Mat symmetrize_odd(const Mat& A, const AntiUnitary& tau);
SpMat symmetrize_odd(const SpMat& A, const AntiUnitary& tau);
int z2_index(const SpectralReport& report);

enum class KramersMode { Commuting, SquaredOffDiagonal };

struct KramersCertificate {
    std::vector<KramersCluster> clusters;
    bool allEven = true;
    double symmetryResidual = 0.0;
};

// Eigenvalues are agglomerated within relTol * spectral radius.
KramersCertificate kramers_multiplicity_check(const Mat& H, const AntiUnitary& tau,
                                              KramersMode mode, double relTol = 1e-8,
                                              double symmetryTol = 1e-10);

struct KernelPolicy;
class DiscreteOperator;

struct SweepStep {
    int parity = 0;
    SpectralReport report;
};

// Parity at each step. Throws AmbiguousKernel naming the step index, and
// SymmetryViolation if a step is not odd symmetric or a step exceeds stepBound
// (Frobenius distance between consecutive operators).
std::vector<int> homotopy_parity_sweep(const std::vector<DiscreteOperator>& path,
                                       const AntiUnitary& tau, const KernelPolicy& policy,
                                       double stepBound,
                                       std::vector<SweepStep>* steps = nullptr);
std::vector<int> homotopy_parity_sweep(const std::vector<Mat>& path, const AntiUnitary& tau,
                                       const KernelPolicy& policy, double stepBound);

}  // namespace z2
