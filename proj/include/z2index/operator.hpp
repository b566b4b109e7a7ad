#pragma once

#include "z2index/common.hpp"

#include <string>

namespace z2 {

// Which rtol the default kernel policy applies: exact and Fourier models are
// accurate to roundoff, finite-difference and truncated models are not.
enum class ModelClass { Exact, FiniteDifference };

// A discretized operator together with the geometry needed to interpret it.
// Node-major layout when fiberDim > 0: index = node * fiberDim + component.
class DiscreteOperator {
public:
    std::string name;
    SpMat matrix;
    ModelClass modelClass = ModelClass::Exact;
    std::vector<double> coords;  // one coordinate per node (node-major layouts)
    Index fiberDim = 0;

    // Hermitian weight on the column space with spectrum in [0,1] that marks
    // where finite-section artifacts live (truncation boundary layer, lattice
    // roughness, high angular momentum). Empty when the model has no
    // truncation artifacts.
    SpMat artifactWeight;

    Index rows() const { return matrix.rows(); }
    Index cols() const { return matrix.cols(); }
    Index nodes() const { return fiberDim > 0 ? matrix.cols() / fiberDim : 0; }
    bool hasArtifactWeight() const { return artifactWeight.nonZeros() > 0; }

    DiscreteOperator withMatrix(SpMat m, std::string newName) const;
    DiscreteOperator adjoint(std::string newName) const;  // weight moves to the row space
};

// Diagonal weight 1 on nodes with |coord| > limit, 0 elsewhere.
SpMat boundary_layer_weight(const std::vector<double>& coords, Index fiberDim, double limit);

}  // namespace z2
