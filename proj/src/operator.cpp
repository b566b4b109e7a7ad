#include "z2index/operator.hpp"

#include <cmath>

namespace z2 {

SpMat to_sparse(const Mat& m, double dropTol) {
    std::vector<Triplet> t;
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (std::abs(m(i, j)) > dropTol) t.emplace_back(i, j, m(i, j));
    SpMat s(m.rows(), m.cols());
    s.setFromTriplets(t.begin(), t.end());
    return s;
}

Mat to_dense(const SpMat& m) { return Mat(m); }

SpMat sparse_identity(Index n) {
    SpMat s(n, n);
    s.setIdentity();
    return s;
}

SpMat kron(const SpMat& a, const SpMat& b) {
    std::vector<Triplet> t;
    t.reserve(static_cast<size_t>(a.nonZeros() * b.nonZeros()));
    for (Index ja = 0; ja < a.outerSize(); ++ja)
        for (SpMat::InnerIterator ia(a, ja); ia; ++ia)
            for (Index jb = 0; jb < b.outerSize(); ++jb)
                for (SpMat::InnerIterator ib(b, jb); ib; ++ib)
                    t.emplace_back(ia.row() * b.rows() + ib.row(), ja * b.cols() + jb,
                                   ia.value() * ib.value());
    SpMat s(a.rows() * b.rows(), a.cols() * b.cols());
    s.setFromTriplets(t.begin(), t.end());
    return s;
}

SpMat conj(const SpMat& a) { return a.conjugate(); }

double frobenius(const SpMat& a) {
    double s = 0.0;
    for (Index j = 0; j < a.outerSize(); ++j)
        for (SpMat::InnerIterator it(a, j); it; ++it) s += std::norm(it.value());
    return std::sqrt(s);
}

DiscreteOperator DiscreteOperator::withMatrix(SpMat m, std::string newName) const {
    DiscreteOperator out = *this;
    out.matrix = std::move(m);
    out.name = std::move(newName);
    return out;
}

DiscreteOperator DiscreteOperator::adjoint(std::string newName) const {
    // Square node-major models carry the same geometric weight on both sides.
    DiscreteOperator out = *this;
    out.matrix = SpMat(matrix.adjoint());
    out.name = std::move(newName);
    if (matrix.rows() != matrix.cols()) out.artifactWeight = SpMat();
    return out;
}

SpMat boundary_layer_weight(const std::vector<double>& coords, Index fiberDim, double limit) {
    const Index n = static_cast<Index>(coords.size()) * fiberDim;
    std::vector<Triplet> t;
    for (size_t j = 0; j < coords.size(); ++j)
        if (std::abs(coords[j]) > limit)
            for (Index c = 0; c < fiberDim; ++c)
                t.emplace_back(static_cast<Index>(j) * fiberDim + c,
                               static_cast<Index>(j) * fiberDim + c, 1.0);
    SpMat w(n, n);
    w.setFromTriplets(t.begin(), t.end());
    return w;
}

}  // namespace z2
