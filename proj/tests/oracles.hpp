#pragma once

// Independent reference computations for the tests. Everything here uses plain
// Eigen (dense SVD / eigensolvers) and none of the library's spectral code, so
// agreement is evidence rather than tautology.

#include "z2index/common.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <random>
#include <vector>

namespace oracle {

using z2::cplx;
using z2::Index;
using z2::Mat;

inline Mat random_complex(std::mt19937_64& rng, Index r, Index c) {
    std::normal_distribution<double> g(0.0, 1.0);
    Mat m(r, c);
    for (Index j = 0; j < c; ++j)
        for (Index i = 0; i < r; ++i) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

inline Mat random_unitary(std::mt19937_64& rng, Index n) {
    Eigen::HouseholderQR<Mat> qr(random_complex(rng, n, n));
    return qr.householderQ();
}

// Standard quaternionic structure [[0, I], [-I, 0]] on C^{2k}.
inline Mat standard_J(Index k) {
    Mat J = Mat::Zero(2 * k, 2 * k);
    J.topRightCorner(k, k).setIdentity();
    J.bottomLeftCorner(k, k) = -Mat::Identity(k, k);
    return J;
}

inline std::vector<double> singular_values(const Mat& A) {
    Eigen::BDCSVD<Mat> svd(A);
    std::vector<double> s(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
    std::sort(s.begin(), s.end());
    return s;
}

inline int kernel_count(const Mat& A, double rtol, double atol = 1e-10) {
    std::vector<double> s = singular_values(A);
    const double thr = std::max(atol, rtol * (s.empty() ? 0.0 : s.back()));
    int k = 0;
    for (double x : s) k += x <= thr;
    return k + int(std::max<Index>(0, A.cols() - A.rows()));
}

// Near-null right singular space of A (sigma <= thr) split by the Hermitian
// weight W: returns the number of directions with weight below 0.1.
inline int physical_kernel_count(const Mat& A, const Mat& W, double rtol, double atol = 1e-10) {
    Eigen::BDCSVD<Mat> svd(A, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double thr = std::max(atol, rtol * (s.size() ? s(0) : 0.0));
    std::vector<Index> idx;
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) <= thr) idx.push_back(i);
    for (Index i = s.size(); i < A.cols(); ++i) idx.push_back(i);  // wide matrices
    if (idx.empty()) return 0;
    Mat V(A.cols(), Index(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i) V.col(Index(i)) = svd.matrixV().col(idx[i]);
    Eigen::SelfAdjointEigenSolver<Mat> es(V.adjoint() * W * V);
    int k = 0;
    for (Index i = 0; i < es.eigenvalues().size(); ++i) k += es.eigenvalues()(i) < 0.1;
    return k;
}

// Same count for a sparse operator whose sparsity graph (of A and W together)
// splits into independent blocks: a dense count per connected component.
inline int physical_kernel_count_blocks(const z2::SpMat& A, const z2::SpMat& W, double rtol, double atol = 1e-10) {
    const Index n = A.cols();
    if (A.rows() != n) return physical_kernel_count(Mat(A), Mat(W), rtol, atol);
    std::vector<Index> parent(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) parent[size_t(i)] = i;
    auto find = [&](Index x) {
        while (parent[size_t(x)] != x) x = parent[size_t(x)] = parent[size_t(parent[size_t(x)])];
        return x;
    };
    for (const z2::SpMat* m : {&A, &W})
        for (Index j = 0; j < m->outerSize(); ++j)
            for (z2::SpMat::InnerIterator it(*m, j); it; ++it) parent[size_t(find(it.row()))] = find(j);
    std::vector<Index> comp(static_cast<size_t>(n)), local(static_cast<size_t>(n));
    std::vector<Index> sizes;
    std::vector<Index> rootId(static_cast<size_t>(n), -1);
    for (Index i = 0; i < n; ++i) {
        const Index r = find(i);
        if (rootId[size_t(r)] < 0) {
            rootId[size_t(r)] = Index(sizes.size());
            sizes.push_back(0);
        }
        comp[size_t(i)] = rootId[size_t(r)];
        local[size_t(i)] = sizes[size_t(comp[size_t(i)])]++;
    }
    std::vector<Mat> a, w;
    for (Index m : sizes) {
        a.push_back(Mat::Zero(m, m));
        w.push_back(Mat::Zero(m, m));
    }
    for (Index j = 0; j < n; ++j) {
        for (z2::SpMat::InnerIterator it(A, j); it; ++it)
            a[size_t(comp[size_t(j)])](local[size_t(it.row())], local[size_t(j)]) = it.value();
        for (z2::SpMat::InnerIterator it(W, j); it; ++it)
            w[size_t(comp[size_t(j)])](local[size_t(it.row())], local[size_t(j)]) = it.value();
    }
    std::vector<Eigen::BDCSVD<Mat>> svds;
    double smax = 0.0;
    for (const Mat& blk : a) {
        svds.emplace_back(blk, Eigen::ComputeFullV);
        smax = std::max(smax, svds.back().singularValues()(0));
    }
    // one global threshold, as for the unsplit matrix
    const double thr = std::max(atol, rtol * smax);
    int k = 0;
    for (size_t c = 0; c < a.size(); ++c) {
        const auto& svd = svds[c];
        std::vector<Index> idx;
        for (Index i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) <= thr) idx.push_back(i);
        if (idx.empty()) continue;
        Mat V(a[c].cols(), Index(idx.size()));
        for (size_t i = 0; i < idx.size(); ++i) V.col(Index(i)) = svd.matrixV().col(idx[i]);
        Eigen::SelfAdjointEigenSolver<Mat> es(V.adjoint() * w[c] * V);
        for (Index i = 0; i < es.eigenvalues().size(); ++i) k += es.eigenvalues()(i) < 0.1;
    }
    return k;
}

// Multiplicities of the eigenvalues of a Hermitian matrix, clustered within
// tol * max|lambda|; the cluster at zero (below zeroTol * max) is skipped.
inline std::vector<int> nonzero_multiplicities(const Mat& H, double tol, double zeroTol = -1.0) {
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    const auto& ev = es.eigenvalues();
    const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    std::vector<int> mult;
    Index i = 0;
    while (i < ev.size()) {
        Index j = i + 1;
        while (j < ev.size() && ev(j) - ev(j - 1) <= tol * scale) ++j;
        if (!(zeroTol >= 0 && std::abs(ev(i)) <= zeroTol * scale)) mult.push_back(int(j - i));
        i = j;
    }
    return mult;
}

}  // namespace oracle
