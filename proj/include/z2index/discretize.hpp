#pragma once

#include "z2index/operator.hpp"
#include "z2index/quaternionic.hpp"

#include <functional>
#include <optional>
#include <utility>

namespace z2 {

// Symmetric grid with an odd number of nodes t_j = j*h, j = -m..m.
// Non-periodic: h = 2L/(points-1). Periodic: period 2L, h = 2L/points, and the
// reflection j -> -j (mod points) is still an exact node permutation.
class Grid1D {
public:
    Grid1D(double halfLength, Index points, bool periodic = false);
    double halfLength() const { return L_; }
    Index points() const { return n_; }
    Index m() const { return (n_ - 1) / 2; }
    double h() const { return h_; }
    bool periodic() const { return periodic_; }
    double coord(Index node) const { return double(node - m()) * h_; }
    std::vector<double> coords() const;
    Index mirror(Index node) const { return n_ - 1 - node; }

private:
    double L_;
    Index n_;
    double h_;
    bool periodic_;
};

enum class LatticeRepresentation { Fourier, Sites };

struct TorusLattice {
    int Lt = 0, Ls = 0;
    LatticeRepresentation representation = LatticeRepresentation::Sites;
    int fluxN = 0;
    Mat linkT;  // Lt x Ls, phase on the link (j,l) -> (j+1,l)
    Mat linkS;  // Lt x Ls, phase on the link (j,l) -> (j,l+1); the l = Ls-1 column carries the gluing phase
    double ht() const;
    double hs() const;
};

// Landau gauge: t-links e^{-i n s h_t / 2pi}, gluing phase e^{i n t_j} on the
// wrap-around s-links, so every plaquette carries 2 pi n / (Lt Ls).
TorusLattice make_flux_lattice(int Lt, int Ls, int n);
double lattice_flux(const TorusLattice& lat);  // total plaquette phase / 2pi

struct FiberBundle {
    Index fiberDim = 0;
    Grading grading;
    Mat thetaFiber;   // matrix part of the anti-linear fiber map
    int thetaSquare = -1;  // (theta conj)^2 = thetaSquare * I
    void validate() const;
};

SpMat reflection_matrix(const Grid1D& grid);

enum class StencilKind { StaggeredForward, StaggeredBackward, Fourier };
std::pair<SpMat, SpMat> derivative_stencil(const Grid1D& grid, StencilKind kind);

struct LineOperator {
    DiscreteOperator op;
    AntiUnitary tau;
    Grid1D grid;
    FiberBundle bundle;
};

// theta_C(z1, z2) = (conj z2, -conj z1) combined with the node reflection.
AntiUnitary line_tau(const Grid1D& grid);

// Node-diagonal bundle map with fiber matrices sampled at node coordinates.
SpMat bundle_map(const Grid1D& grid, const std::function<Mat(double)>& field, Index fiberDim = 2);

// D = d/dt (staggered forward) + Phi(t) on C^2-valued grid functions, node-major.
// Phi must satisfy theta conj(Phi(-t)) theta^{-1} = Phi(t)^†; checked on assembly.
LineOperator build_line_with_potential(const Grid1D& grid, const std::function<Mat(double)>& phi,
                                       const std::string& name, double boundaryLayer = 5.0);
// Phi = sign * diag(arctan t, -arctan t).
LineOperator build_line_operator(const Grid1D& grid, double potentialSign = 1.0, double boundaryLayer = 5.0);
// i * (line operator).
LineOperator build_example_line_with_V(const Grid1D& grid, double boundaryLayer = 5.0);

struct TorusTrivial {
    int K = 0;
    std::vector<std::pair<int, int>> modes;  // (m, n) per Fourier index
    DiscreteOperator Dplus;                  // E+ -> E-, diagonal i m - n
    DiscreteOperator full;                   // [[0, D-], [D+, 0]] on E+ (+) E-
    AntiUnitary tau;                         // on E+ (+) E-
    Grading grading;
    FiberBundle bundle;
};
TorusTrivial build_torus_trivial(int K);
Index torus_mode_index(int K, int m, int n);

struct FluxTorus {
    int n = 0;
    double r = 0.0;
    TorusLattice lattice;
    DiscreteOperator dbar;   // X on sites, with t-roughness weight
    DiscreteOperator Dplus;  // [[0, -X^†], [X, 0]] : (L0+, L1+) -> (L0-, L1-)
    DiscreteOperator full;   // [[0, D-], [D+, 0]], D- = (D+)^†
    AntiUnitary tau;         // on the full graded space
    Grading grading;
    FiberBundle bundle;
    SpMat reflection;        // R: site (t,s) -> (-t,s)
};
FluxTorus build_torus_flux(int n, const TorusLattice& lattice, double r);

struct CliffordGrading {
    Mat gamma;     // Gamma itself
    Mat basis;     // eigenbasis of Gamma, + columns first; identity when Gamma is diagonal
    Grading grading;
};
CliffordGrading clifford_gamma(const std::vector<Mat>& generators, double tol = 1e-12);
Mat cylinder_clifford(const Grading& grading);

}  // namespace z2
