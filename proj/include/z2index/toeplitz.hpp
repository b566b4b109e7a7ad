#pragma once

#include "z2index/spectra.hpp"

#include <array>
#include <functional>
#include <optional>

namespace z2 {

// Matrix-valued function on base points (complex coordinates; real-line bases
// use the real axis).
struct Symbol {
    std::function<Mat(cplx)> sampler;
    Index matrixSize = 1;
    double invertibilityRadius = 0.0;
    double invertibilityBound = 1.0;  // C: ||f(x)^{-1}|| <= C for |x| > radius
};

struct SymbolReport {
    double symmetryResidual = 0.0;  // max over nodes of ||f(theta x) - f(x)^†||
    Index worstSymmetryNode = -1;
    double worstInverseNorm = 0.0;  // max ||f(x)^{-1}|| over nodes outside the radius
    Index worstInverseNode = -1;
};

// Throws SymmetryViolation if f(theta x) != f(x)^† beyond tol at some node and
// NotInvertibleAtInfinity if the bound C fails outside the radius.
SymbolReport check_symbol(const Symbol& sym, const std::vector<cplx>& baseNodes,
                          const std::function<cplx(cplx)>& theta, double tol = 1e-12);

struct KernelProjection {
    Mat basis;  // orthonormal columns spanning the detected (physical) kernel
    GapCertificate gap;
    std::optional<AntiUnitary> tau;  // tau restricted to the span; empty for a zero kernel
};

// D self-adjoint and odd symmetric under tau. An empty kernel is isolated by
// convention. Throws NoGap when the cut is ambiguous or the gap ratio is below
// the policy's gapMin.
KernelProjection certify_gap(const DiscreteOperator& D, const AntiUnitary& tau, const KernelPolicy& policy);

struct ToeplitzMatrix {
    Mat T;  // basis^† M_f basis
    AntiUnitary tau;
    Mat artifactWeight;  // basis^† W basis when the ambient weight is given
};

// Toeplitz matrix of a multiplication operator M_f given on the ambient space.
ToeplitzMatrix compress(const KernelProjection& proj, const Mat& multiplication, const Mat& ambientWeight = Mat());
// Node-diagonal M_f on (nodes x fiber) ⊗ C^k with f sampled at the node points.
ToeplitzMatrix compress(const KernelProjection& proj, const Symbol& sym, const std::vector<cplx>& nodes,
                        Index fiberDim, const Mat& ambientWeight = Mat());

// The compressed Toeplitz matrix as an operator for kernel analysis.
DiscreteOperator toeplitz_operator(const ToeplitzMatrix& T, const std::string& name);

// One truncation of a gapped model: the Callias operator C = D + i M_f on the
// full truncated space and its Toeplitz compression, both with tau.
struct ToeplitzInstance {
    DiscreteOperator callias;
    AntiUnitary calliasTau;
    DiscreteOperator toeplitz;
    AntiUnitary toeplitzTau;
};

struct ToeplitzComparison {
    int indTf = 0;
    int indC = 0;
    bool agree = false;
    StabilizationResult toeplitzSweep;
    StabilizationResult calliasSweep;
};

// Parities of T_f and C from stabilization sweeps over the truncation sizes.
// Unstable from either sweep propagates.
ToeplitzComparison toeplitz_vs_callias(const std::function<ToeplitzInstance(int)>& builder,
                                       const std::vector<int>& sizes, const KernelPolicy& policy);

// Lowest Landau levels on the plane with unit magnetic length. Orbitals
// psi_{n,m} (level n, angular momentum m <= M) times C^2; E+ holds levels
// 0..NL and E- levels 0..NL-1. D maps E+(n,m) to E-(n-1,m) with sqrt(2n) and
// is real symmetric, so its kernel is the lowest level ⊗ C^2 with gap sqrt 2.
// The C^2 factor carries theta = [[0,1],[-1,0]] o conj; complex conjugation of
// the coefficients is the base involution z -> conj(z) on orbitals.
struct LandauModel {
    int levels = 0;  // NL
    int maxM = 0;    // M
    std::vector<std::pair<int, int>> orbitals;  // (level, m) per basis index, E+ block first
    std::vector<int> sector;                    // +1 for E+, -1 for E-
    DiscreteOperator D;                         // on basis ⊗ C^2, index = 2*b + a
    AntiUnitary tau;
    Mat highMWeight;                            // diagonal: 1 on m > M - max(2, M/4)
    std::vector<cplx> quadNodes;
    std::vector<double> quadWeights;            // include the Gaussian factor
    Mat orbitalValues;                          // quadNodes x basis (E+ then E- copies)
    double orthonormalityError = 0.0;
};
LandauModel build_landau_model(int levels, int maxM);
// Sector-preserving M_f on basis ⊗ C^2 by quadrature.
Mat landau_multiplication(const LandauModel& model, const Symbol& sym);
// u(z) = z / sqrt(|z|^2 + 1), f = diag(u, conj u): winds once, f(conj z) = f(z)^†.
Symbol landau_winding_symbol();
// Compactly supported perturbation bump(z) (c0 I + i Im(z) (c . sigma)) with real
// coefficients, bump = (1 - |z|^2/rho^2)^3 on |z| < rho.
Symbol landau_perturbation(double c0, const std::array<double, 3>& c, double rho = 2.0);
Symbol symbol_sum(const Symbol& a, const Symbol& b);
ToeplitzInstance landau_instance(int levels, int maxM, const Symbol& sym);

}  // namespace z2
