#pragma once

#include "z2index/discretize.hpp"
#include "z2index/spectra.hpp"

#include <functional>
#include <utility>

namespace z2 {

// Hermitian bundle map sampled at node coordinates. A 1x1 sample stands for
// that scalar times the identity on the whole fiber, which keeps potentials
// on wide fibers (cylinders over a truncated torus) cheap.
struct Potential {
    std::function<Mat(double)> sampler;
    double essentialRadius = 0.0;  // admissibility is audited on |coord| > essentialRadius
    double margin = 0.0;           // filled in by certify_potential
};

struct MarginReport {
    double margin = 0.0;
    Index worstNode = -1;
    double worstCoord = 0.0;
};

// min over the nodes of lambda_min(Phi^2) - ||[D, Phi] restricted to the node's rows||.
// D is the Dirac part alone. Throws NotAdmissible naming the worst node when
// the minimum is not positive.
MarginReport admissibility_margin(const DiscreteOperator& D, const Potential& phi,
                                  const std::vector<Index>& outsideNodes);
// Nodes with |coord| > radius.
std::vector<Index> nodes_outside(const DiscreteOperator& D, double radius);
// Runs admissibility_margin on nodes_outside(D, K) and stores the margin.
Potential certify_potential(const DiscreteOperator& D, Potential phi);

// Node-major multiplication operator for the potential.
SpMat potential_matrix(const DiscreteOperator& D, const Potential& phi);

// B = D + i Phi. Audits admissibility outside the essential radius and odd
// symmetry of B under tau. The artifact weight of D is carried over.
DiscreteOperator build_callias_ungraded(const DiscreteOperator& D, const Potential& phi,
                                        const AntiUnitary& tau, const std::string& name = "callias_B",
                                        double symmetryTol = 1e-10);
// [[0, B^†], [B, 0]] on E ⊕ E; B sits in the lower-left block. The quaternionic
// structure is J_2 = [[0, J], [J, 0]] (tau ⊕ tau would ask B to be self-adjoint).
std::pair<DiscreteOperator, AntiUnitary> graded_double(const DiscreteOperator& B, const AntiUnitary& tau);

struct BoundaryReduction {
    std::vector<Mat> projPlus;   // spectral projection of Phi onto (0, inf), per hypersurface node
    std::vector<Mat> projMinus;  // onto (-inf, 0)
    Grading alpha;               // grading of E_{N+} by -i gamma, + block first
    Mat basis;                   // columns: orthonormal frame of E_{N+} in node-major fiber coordinates
    DiscreteOperator reducedOperator;  // projected hypersurface operator on E_{N+}
    DiscreteOperator reducedPlus;      // its alpha-even to alpha-odd block
};

// Hypersurface data in node-major order: node x carries Phi(x) and gamma(x)
// (Clifford action of the outward unit normal); `hypersurfaceDirac` acts on
// nodes x fiber and may be 0 x 0 for a zero dimensional hypersurface.
BoundaryReduction boundary_reduction(const std::vector<Mat>& phiAtNodes, const std::vector<Mat>& gammaAtNodes,
                                     const SpMat& hypersurfaceDirac, double tol = 1e-10);

// Smooth sign function used as the model potential: tanh(3r).
double model_sign_profile(double r);

// D_N ⊗ 1 + gamma ⊗ d/dr + i (w h / 2) Lap_r on the node-major tensor product
// (index = node * dim(D_N) + fiber). gamma = i on E+ and -i on E-. The central
// difference is real antisymmetric, so it keeps the reflection-free tau
// J_N ⊗ 1 exact; the imaginary Wilson term removes the r-doubler.
struct CylinderDirac {
    DiscreteOperator op;
    AntiUnitary tau;
    Grid1D grid;
};
CylinderDirac cylinder_dirac(const DiscreteOperator& DN, const Grading& grading, const AntiUnitary& tauN,
                             const Grid1D& grid, double wilson = 1.0, double boundaryLayer = 5.0);

// M_sign = D_hat + sign * i * lambda * tanh(3r).
struct ModelOperator {
    DiscreteOperator op;
    AntiUnitary tau;
    MarginReport margin;
};
ModelOperator build_model_operator(const DiscreteOperator& DN, const Grading& grading, const AntiUnitary& tauN,
                                   const Grid1D& grid, int sign, double lambda = 1.0, double wilson = 1.0);

// Surgery at the tau-invariant cut pair {-cut, +cut}: op2 takes op0's rows on
// |t| < cut and op1's rows outside, op3 the reverse. Rows of op0 and op1 must
// agree on the window of `window` nodes centered at each cut node.
std::pair<DiscreteOperator, DiscreteOperator> cut_and_paste(const DiscreteOperator& op0, const DiscreteOperator& op1,
                                                            double cut, const AntiUnitary& tau, Index window = 5,
                                                            double tol = 1e-12);

}  // namespace z2
