#pragma once

// Exact block structure of sparse operators. A permutation of rows and
// columns that splits the bipartite sparsity graph into connected components
// leaves singular values and right singular vectors unchanged, so every
// spectral question is answered per component.

#include "z2index/common.hpp"

#include <map>
#include <string>

namespace z2::detail {

struct Component {
    std::vector<Index> rows;  // ascending original row indices
    std::vector<Index> cols;  // ascending original column indices
    SpMat block;              // rows.size() x cols.size()
};

std::vector<Component> split_components(const SpMat& D);

enum class Method { Dense, Banded };

struct ComponentPlan {
    Method method = Method::Dense;
    Index kd = 0;  // band half-width of the interleaved Hermitian embedding
    std::vector<Index> order;  // embedding positions: >= 0 column c, < 0 row (-1 - r)
};

ComponentPlan plan_component(const Component& c);

// Column-side singular values of one component, ascending (cols.size() values).
std::vector<double> component_values(const Component& c, const ComponentPlan& plan);

// Orthonormal basis (cols.size() x count) of the right near-null space, i.e. the
// right singular vectors of the `count` smallest column-side values.
// `nextValue` is the first value above the cluster, used to place the shift.
Mat component_null_vectors(const Component& c, const ComponentPlan& plan, int count,
                           double clusterMax, double nextValue);

// Per-component values for a whole operator with duplicate blocks computed once.
struct ComponentSpectra {
    std::vector<Component> components;
    std::vector<ComponentPlan> plans;
    std::vector<std::vector<double>> values;
};

ComponentSpectra component_spectra(const SpMat& D);

}  // namespace z2::detail
