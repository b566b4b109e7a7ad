#include "structured.hpp"

#include "lapack.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>

namespace z2::detail {

namespace {

struct UnionFind {
    std::vector<Index> parent;
    explicit UnionFind(Index n) : parent(static_cast<size_t>(n)) {
        std::iota(parent.begin(), parent.end(), Index(0));
    }
    Index find(Index x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    }
    void unite(Index a, Index b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    }
};

// Diagonal unitary gauge A D B with all entries real, found along a spanning
// forest of the bipartite graph. Fails when some cycle carries a non-real
// holonomy.
bool realify(const SpMat& D, Eigen::SparseMatrix<double, Eigen::ColMajor, long>& out, Vec& colPhase) {
    const Index r = D.rows(), c = D.cols();
    Vec rowPhase = Vec::Zero(r);
    colPhase = Vec::Zero(c);
    SpMat Dr = D;  // column access
    Eigen::SparseMatrix<cplx, Eigen::RowMajor, long> Drow = D;
    auto unit = [](cplx z) { return z / std::abs(z); };
    for (Index start = 0; start < c; ++start) {
        if (colPhase(start) != cplx(0.0)) continue;
        colPhase(start) = 1.0;
        std::queue<Index> q;  // >= 0 column, < 0 row
        q.push(start);
        while (!q.empty()) {
            Index node = q.front();
            q.pop();
            if (node >= 0) {
                for (SpMat::InnerIterator it(Dr, node); it; ++it) {
                    if (rowPhase(it.row()) == cplx(0.0) && it.value() != cplx(0.0)) {
                        rowPhase(it.row()) = std::conj(unit(it.value() * colPhase(node)));
                        q.push(-1 - it.row());
                    }
                }
            } else {
                const Index row = -1 - node;
                for (decltype(Drow)::InnerIterator it(Drow, row); it; ++it) {
                    if (colPhase(it.col()) == cplx(0.0) && it.value() != cplx(0.0)) {
                        colPhase(it.col()) = std::conj(unit(rowPhase(row) * it.value()));
                        q.push(it.col());
                    }
                }
            }
        }
    }
    for (Index i = 0; i < r; ++i)
        if (rowPhase(i) == cplx(0.0)) rowPhase(i) = 1.0;
    std::vector<Eigen::Triplet<double, long>> t;
    for (Index j = 0; j < c; ++j)
        for (SpMat::InnerIterator it(Dr, j); it; ++it) {
            const cplx v = rowPhase(it.row()) * it.value() * colPhase(j);
            if (std::abs(v.imag()) > 1e-14 * std::abs(v)) return false;
            t.emplace_back(it.row(), j, v.real());
        }
    out.resize(r, c);
    out.setFromTriplets(t.begin(), t.end());
    return true;
}

std::vector<long long> block_key(const Eigen::SparseMatrix<double, Eigen::ColMajor, long>& B) {
    double maxAbs = 0.0;
    for (Index j = 0; j < B.outerSize(); ++j)
        for (std::remove_reference_t<decltype(B)>::InnerIterator it(B, j); it; ++it) maxAbs = std::max(maxAbs, std::abs(it.value()));
    std::vector<long long> key{B.rows(), B.cols(), static_cast<long long>(std::llround(maxAbs * 1e13))};
    for (Index j = 0; j < B.outerSize(); ++j)
        for (std::remove_reference_t<decltype(B)>::InnerIterator it(B, j); it; ++it) {
            key.push_back(it.row());
            key.push_back(j);
            key.push_back(std::llround(it.value() / (maxAbs > 0 ? maxAbs : 1.0) * 1e13));
        }
    return key;
}

std::vector<double> from_hermitian_embedding(const RVec& w, Index r, Index c) {
    const Index m = std::min(r, c), N = w.size();
    std::vector<double> vals(static_cast<size_t>(c - m), 0.0);
    for (Index i = N - m; i < N; ++i) vals.push_back(std::abs(w(i)));
    std::sort(vals.begin(), vals.end());
    return vals;
}

std::vector<double> pad_zeros(std::vector<double> v, Index c) {
    while (static_cast<Index>(v.size()) < c) v.insert(v.begin(), 0.0);
    return v;
}

std::vector<Index> positions(const ComponentPlan& plan, Index r, Index c, bool rows) {
    std::vector<Index> pos(static_cast<size_t>(rows ? r : c));
    for (size_t p = 0; p < plan.order.size(); ++p) {
        const Index o = plan.order[p];
        if (rows && o < 0) pos[static_cast<size_t>(-1 - o)] = static_cast<Index>(p);
        if (!rows && o >= 0) pos[static_cast<size_t>(o)] = static_cast<Index>(p);
    }
    return pos;
}

template <class Sp, class Scalar>
std::vector<double> banded_values(const Sp& B, const ComponentPlan& plan) {
    const Index r = B.rows(), c = B.cols(), N = r + c, kd = plan.kd;
    auto rowPos = positions(plan, r, c, true), colPos = positions(plan, r, c, false);
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> ab =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(kd + 1, N);
    for (Index j = 0; j < B.outerSize(); ++j)
        for (typename Sp::InnerIterator it(B, j); it; ++it) {
            const Index p = rowPos[static_cast<size_t>(it.row())], q = colPos[static_cast<size_t>(j)];
            if (p < q)
                ab(kd + p - q, q) = it.value();
            else
                ab(kd + q - p, p) = Eigen::numext::conj(it.value());
        }
    RVec w;
    if constexpr (std::is_same_v<Scalar, double>)
        w = lapack::sbev_values(ab, kd);
    else
        w = lapack::hbev_values(ab, kd);
    return from_hermitian_embedding(w, r, c);
}

}  // namespace

std::vector<Component> split_components(const SpMat& D) {
    const Index m = D.rows(), n = D.cols();
    UnionFind uf(m + n);
    for (Index j = 0; j < D.outerSize(); ++j)
        for (SpMat::InnerIterator it(D, j); it; ++it)
            if (it.value() != cplx(0.0)) uf.unite(it.row(), m + j);
    std::vector<Index> compOf(static_cast<size_t>(m + n), -1);
    std::vector<Component> comps;
    std::vector<Index> rootToComp(static_cast<size_t>(m + n), -1);
    // Components are ordered by their smallest column, rows-only components last.
    for (Index j = 0; j < n; ++j) {
        Index root = uf.find(m + j);
        if (rootToComp[static_cast<size_t>(root)] < 0) {
            rootToComp[static_cast<size_t>(root)] = static_cast<Index>(comps.size());
            comps.emplace_back();
        }
        comps[static_cast<size_t>(rootToComp[static_cast<size_t>(root)])].cols.push_back(j);
    }
    for (Index i = 0; i < m; ++i) {
        Index root = uf.find(i);
        if (rootToComp[static_cast<size_t>(root)] < 0) {
            rootToComp[static_cast<size_t>(root)] = static_cast<Index>(comps.size());
            comps.emplace_back();
        }
        comps[static_cast<size_t>(rootToComp[static_cast<size_t>(root)])].rows.push_back(i);
    }
    std::vector<Index> localRow(static_cast<size_t>(m)), localCol(static_cast<size_t>(n)), rowComp(static_cast<size_t>(m));
    for (size_t k = 0; k < comps.size(); ++k) {
        for (size_t a = 0; a < comps[k].rows.size(); ++a) {
            localRow[static_cast<size_t>(comps[k].rows[a])] = static_cast<Index>(a);
            rowComp[static_cast<size_t>(comps[k].rows[a])] = static_cast<Index>(k);
        }
        for (size_t a = 0; a < comps[k].cols.size(); ++a)
            localCol[static_cast<size_t>(comps[k].cols[a])] = static_cast<Index>(a);
    }
    std::vector<std::vector<Triplet>> trip(comps.size());
    for (Index j = 0; j < D.outerSize(); ++j)
        for (SpMat::InnerIterator it(D, j); it; ++it)
            if (it.value() != cplx(0.0)) {
                const Index k = rowComp[static_cast<size_t>(it.row())];
                trip[static_cast<size_t>(k)].emplace_back(localRow[static_cast<size_t>(it.row())],
                                                          localCol[static_cast<size_t>(j)], it.value());
            }
    for (size_t k = 0; k < comps.size(); ++k) {
        comps[k].block.resize(static_cast<Index>(comps[k].rows.size()), static_cast<Index>(comps[k].cols.size()));
        comps[k].block.setFromTriplets(trip[k].begin(), trip[k].end());
    }
    return comps;
}

ComponentPlan plan_component(const Component& c) {
    ComponentPlan plan;
    const Index r = static_cast<Index>(c.rows.size()), n = static_cast<Index>(c.cols.size());
    size_t a = 0, b = 0;
    while (a < c.cols.size() || b < c.rows.size()) {
        if (b == c.rows.size() || (a < c.cols.size() && c.cols[a] <= c.rows[b]))
            plan.order.push_back(static_cast<Index>(a++));
        else
            plan.order.push_back(-1 - static_cast<Index>(b++));
    }
    auto rowPos = positions(plan, r, n, true), colPos = positions(plan, r, n, false);
    Index kd = 0;
    for (Index j = 0; j < c.block.outerSize(); ++j)
        for (SpMat::InnerIterator it(c.block, j); it; ++it)
            kd = std::max(kd, std::abs(rowPos[static_cast<size_t>(it.row())] - colPos[static_cast<size_t>(j)]));
    plan.kd = std::max<Index>(kd, 1);
    const Index N = r + n;
    if (N > 1200 && plan.kd <= std::max<Index>(16, N / 32))
        plan.method = Method::Banded;
    else
        plan.method = Method::Dense;
    if (plan.method == Method::Dense && std::max(r, n) > 8000)
        throw NumericalFailure("component of size " + std::to_string(std::max(r, n)) +
                               " exceeds the dense cap and is not narrow-banded");
    return plan;
}

std::vector<double> component_values(const Component& c, const ComponentPlan& plan) {
    const Index r = c.block.rows(), n = c.block.cols();
    if (r == 0 || n == 0) return std::vector<double>(static_cast<size_t>(n), 0.0);
    Eigen::SparseMatrix<double, Eigen::ColMajor, long> real;
    Vec colPhase;
    const bool isReal = realify(c.block, real, colPhase);
    if (plan.method == Method::Dense) {
        if (isReal) return pad_zeros(lapack::svd_values(RMat(real)), n);
        return pad_zeros(lapack::svd_values(Mat(c.block)), n);
    }
    if (isReal) return banded_values<decltype(real), double>(real, plan);
    return banded_values<SpMat, cplx>(c.block, plan);
}

Mat component_null_vectors(const Component& c, const ComponentPlan& plan, int count,
                           double clusterMax, double nextValue) {
    const Index r = c.block.rows(), n = c.block.cols();
    if (count <= 0) return Mat(n, 0);
    if (count >= n || r == 0) {
        if (count >= n) return Mat::Identity(n, n);
    }
    if (plan.method == Method::Dense) {
        std::vector<double> vals;
        Mat V;
        lapack::svd_full(Mat(c.block), vals, V);
        return V.leftCols(count);
    }
    // Block inverse iteration on the Hermitian embedding H = [[0, D^†], [D, 0]]
    // (columns first), shifted slightly off zero so exact null vectors do not
    // make H - mu singular.
    using SpI = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;
    const Index N = r + n;
    std::vector<Eigen::Triplet<cplx, int>> t;
    for (Index j = 0; j < c.block.outerSize(); ++j)
        for (SpMat::InnerIterator it(c.block, j); it; ++it) {
            t.emplace_back(int(n + it.row()), int(j), it.value());
            t.emplace_back(int(j), int(n + it.row()), std::conj(it.value()));
        }
    double mu = std::isfinite(nextValue) ? 1e-3 * nextValue : 10.0 * clusterMax + 1e-8;
    mu = std::max(mu, 1e-14);
    for (Index i = 0; i < N; ++i) t.emplace_back(int(i), int(i), -mu);
    SpI H(static_cast<int>(N), static_cast<int>(N));
    H.setFromTriplets(t.begin(), t.end());
    H.makeCompressed();
    Eigen::SparseLU<SpI> lu;
    lu.analyzePattern(H);
    lu.factorize(H);
    if (lu.info() != Eigen::Success) throw NumericalFailure("sparse LU of shifted embedding failed");

    const Index padCols = std::max<Index>(0, n - r), padRows = std::max<Index>(0, r - n);
    const Index sigmaCount = count - padCols;
    const Index pH = count + sigmaCount + padRows;
    const Index p = std::min<Index>(N, pH + 2);
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> g;
    Mat Q(N, p);
    for (Index j = 0; j < p; ++j)
        for (Index i = 0; i < N; ++i) Q(i, j) = cplx(g(rng), g(rng));
    for (int iter = 0; iter < 10; ++iter) {
        Eigen::HouseholderQR<Mat> qr(Q);
        Q = qr.householderQ() * Mat::Identity(N, p);
        Mat Z(N, p);
        for (Index j = 0; j < p; ++j) Z.col(j) = lu.solve(Q.col(j));
        Q = Z;
    }
    Eigen::HouseholderQR<Mat> qr(Q);
    Q = qr.householderQ() * Mat::Identity(N, p);
    SpMat Hs(N, N);
    {
        std::vector<Triplet> th;
        for (Index j = 0; j < c.block.outerSize(); ++j)
            for (SpMat::InnerIterator it(c.block, j); it; ++it) {
                th.emplace_back(n + it.row(), j, it.value());
                th.emplace_back(j, n + it.row(), std::conj(it.value()));
            }
        Hs.setFromTriplets(th.begin(), th.end());
    }
    Mat T = Q.adjoint() * (Hs * Q);
    T = 0.5 * (T + T.adjoint());
    RVec theta;
    Mat Zt;
    lapack::heev(T, theta, Zt);
    std::vector<Index> idx(static_cast<size_t>(p));
    std::iota(idx.begin(), idx.end(), Index(0));
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return std::abs(theta(a)) < std::abs(theta(b)); });
    Mat Y(N, pH);
    for (Index j = 0; j < pH; ++j) Y.col(j) = Q * Zt.col(idx[static_cast<size_t>(j)]);
    Mat X = Y.topRows(n);
    Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeThinU);
    Index found = 0;
    for (Index j = 0; j < svd.singularValues().size(); ++j)
        if (svd.singularValues()(j) > 0.5) ++found;
    if (found != count)
        throw NumericalFailure("inverse iteration resolved " + std::to_string(found) +
                               " right null directions, expected " + std::to_string(count));
    return svd.matrixU().leftCols(count);
}

ComponentSpectra component_spectra(const SpMat& D) {
    ComponentSpectra out;
    out.components = split_components(D);
    std::map<std::vector<long long>, size_t> cache;
    for (size_t k = 0; k < out.components.size(); ++k) {
        const Component& c = out.components[k];
        out.plans.push_back(plan_component(c));
        Eigen::SparseMatrix<double, Eigen::ColMajor, long> real;
        Vec phase;
        if (c.block.rows() > 0 && c.block.cols() > 8 && realify(c.block, real, phase)) {
            auto key = block_key(real);
            auto it = cache.find(key);
            if (it != cache.end()) {
                out.values.push_back(out.values[it->second]);
                continue;
            }
            cache.emplace(std::move(key), k);
        }
        out.values.push_back(component_values(c, out.plans.back()));
    }
    return out;
}

}  // namespace z2::detail
