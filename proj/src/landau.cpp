// Landau-level desk model for the Toeplitz experiments.
//
// psi_{n,m} = p_{n,m}(z, conj z) exp(-|z|^2/4) with
//   p_{0,m} = z^m / sqrt(2 pi 2^m m!),  p_{n+1} = (conj(z) p - 2 d_z p) / sqrt(2(n+1)),
// i.e. the raising operator applied to the lowest level. Integrals of
// p p' exp(-|z|^2/2) use tensor Gauss-Hermite quadrature of order 2M+8, which
// is exact for the polynomial parts at these truncations.

#include "z2index/toeplitz.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace z2 {

namespace {

// Nodes and weights for int g(x) exp(-x^2) dx. Golub-Welsch for the starting
// nodes, Newton on the orthonormal recurrence, Christoffel weights; the tail
// weights are relatively accurate, which matters because the integrands grow
// like |z|^{2M} there.
void gauss_hermite(int q, std::vector<double>& x, std::vector<double>& w) {
    RMat Jm = RMat::Zero(q, q);
    for (int k = 1; k < q; ++k) Jm(k, k - 1) = Jm(k - 1, k) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<RMat> es(Jm);
    x.assign(size_t(q), 0.0);
    w.assign(size_t(q), 0.0);
    auto recur = [q](double t, double& pq, double& pq1, double& sumsq) {
        // orthonormal w.r.t. exp(-t^2)/sqrt(pi)
        double p0 = 1.0, p1 = std::sqrt(2.0) * t;
        sumsq = 1.0;
        if (q == 1) {
            pq = p1;
            pq1 = p0;
            return;
        }
        sumsq += p1 * p1;
        for (int k = 1; k < q; ++k) {
            const double p2 = (std::sqrt(2.0) * t * p1 - std::sqrt(double(k)) * p0) / std::sqrt(double(k + 1));
            p0 = p1;
            p1 = p2;
            if (k + 1 < q) sumsq += p1 * p1;
        }
        pq = p1;
        pq1 = p0;
    };
    for (int i = 0; i < q; ++i) {
        double t = es.eigenvalues()(i);
        double pq, pq1, s;
        for (int it = 0; it < 3; ++it) {
            recur(t, pq, pq1, s);
            t -= pq / (std::sqrt(2.0 * q) * pq1);
        }
        recur(t, pq, pq1, s);
        x[size_t(i)] = t;
        w[size_t(i)] = std::sqrt(M_PI) / s;
    }
}

using Poly = std::map<std::pair<int, int>, double>;  // (a, b) -> coefficient of z^a conj(z)^b

}  // namespace

LandauModel build_landau_model(int levels, int maxM) {
    if (levels < 1 || maxM < 1) throw InvalidParameter("Landau model needs levels >= 1 and M >= 1");
    if (maxM > 60) throw InvalidParameter("Landau model: M > 60 exceeds double range of the orbital polynomials");
    LandauModel out{levels, maxM, {}, {}, {}, make_standard_J(1), Mat(), {}, {}, Mat(), 0.0};
    for (int n = 0; n <= levels; ++n)
        for (int m = 0; m <= maxM; ++m) {
            out.orbitals.push_back({n, m});
            out.sector.push_back(1);
        }
    for (int n = 0; n < levels; ++n)
        for (int m = 0; m <= maxM; ++m) {
            out.orbitals.push_back({n, m});
            out.sector.push_back(-1);
        }
    const Index nb = Index(out.orbitals.size());

    const int q = 2 * maxM + 8;
    std::vector<double> gx, gw;
    gauss_hermite(q, gx, gw);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) {
            out.quadNodes.push_back(cplx(std::sqrt(2.0) * gx[size_t(i)], std::sqrt(2.0) * gx[size_t(j)]));
            out.quadWeights.push_back(2.0 * gw[size_t(i)] * gw[size_t(j)]);
        }
    const Index nq = Index(out.quadNodes.size());

    // polynomial parts of every (n, m) orbital
    const int maxDeg = maxM + levels;
    Mat zp(nq, maxDeg + 1), zbp(nq, maxDeg + 1);
    for (Index i = 0; i < nq; ++i) {
        zp(i, 0) = zbp(i, 0) = 1.0;
        for (int d = 1; d <= maxDeg; ++d) {
            zp(i, d) = zp(i, d - 1) * out.quadNodes[size_t(i)];
            zbp(i, d) = zbp(i, d - 1) * std::conj(out.quadNodes[size_t(i)]);
        }
    }
    std::map<std::pair<int, int>, Vec> values;
    for (int m = 0; m <= maxM; ++m) {
        Poly p;
        p[{m, 0}] = 1.0 / std::sqrt(2.0 * M_PI * std::pow(2.0, m) * std::tgamma(m + 1.0));
        for (int n = 0; n <= levels; ++n) {
            Vec v = Vec::Zero(nq);
            for (const auto& [ab, c] : p) v += c * zp.col(ab.first).cwiseProduct(zbp.col(ab.second));
            values[{n, m}] = v;
            Poly nxt;
            for (const auto& [ab, c] : p) {
                nxt[{ab.first, ab.second + 1}] += c;
                if (ab.first > 0) nxt[{ab.first - 1, ab.second}] -= 2.0 * ab.first * c;
            }
            for (auto& [ab, c] : nxt) c /= std::sqrt(2.0 * (n + 1));
            p = std::move(nxt);
        }
    }
    out.orbitalValues = Mat(nq, nb);
    for (Index b = 0; b < nb; ++b) out.orbitalValues.col(b) = values[out.orbitals[size_t(b)]];
    Eigen::Map<const RVec> w(out.quadWeights.data(), nq);
    Mat G = out.orbitalValues.adjoint() * (w.asDiagonal() * out.orbitalValues);
    for (Index i = 0; i < nb; ++i)
        for (Index j = 0; j < nb; ++j)
            if (out.sector[size_t(i)] == out.sector[size_t(j)])
                out.orthonormalityError = std::max(out.orthonormalityError, std::abs(G(i, j) - (i == j ? 1.0 : 0.0)));

    std::map<std::pair<int, int>, Index> minusIndex;
    for (Index b = 0; b < nb; ++b)
        if (out.sector[size_t(b)] < 0) minusIndex[out.orbitals[size_t(b)]] = b;
    std::vector<Triplet> t, jt;
    for (Index b = 0; b < nb; ++b) {
        const auto [n, m] = out.orbitals[size_t(b)];
        if (out.sector[size_t(b)] > 0 && n > 0) {
            const Index c = minusIndex.at({n - 1, m});
            const double v = std::sqrt(2.0 * n);
            for (int a = 0; a < 2; ++a) {
                t.emplace_back(2 * c + a, 2 * b + a, v);
                t.emplace_back(2 * b + a, 2 * c + a, v);
            }
        }
        jt.emplace_back(2 * b, 2 * b + 1, 1.0);
        jt.emplace_back(2 * b + 1, 2 * b, -1.0);
    }
    out.D.name = "landau_D";
    out.D.matrix.resize(2 * nb, 2 * nb);
    out.D.matrix.setFromTriplets(t.begin(), t.end());
    out.D.modelClass = ModelClass::Exact;
    SpMat J(2 * nb, 2 * nb);
    J.setFromTriplets(jt.begin(), jt.end());
    out.tau = AntiUnitary(J);
    const int layer = std::max(2, maxM / 4);
    out.highMWeight = Mat::Zero(2 * nb, 2 * nb);
    for (Index b = 0; b < nb; ++b)
        if (out.orbitals[size_t(b)].second > maxM - layer) out.highMWeight(2 * b, 2 * b) = out.highMWeight(2 * b + 1, 2 * b + 1) = 1.0;
    return out;
}

Mat landau_multiplication(const LandauModel& model, const Symbol& sym) {
    if (sym.matrixSize != 2) throw DimensionMismatch("Landau model carries C^2 symbols");
    const Index nq = Index(model.quadNodes.size());
    const Index nb = model.orbitalValues.cols();
    std::vector<Mat> f(static_cast<size_t>(nq));
    for (Index i = 0; i < nq; ++i) {
        f[size_t(i)] = sym.sampler(model.quadNodes[size_t(i)]);
        if (f[size_t(i)].rows() != 2 || f[size_t(i)].cols() != 2) throw DimensionMismatch("symbol sample size");
    }
    Mat M = Mat::Zero(2 * nb, 2 * nb);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            Vec wf(nq);
            bool any = false;
            for (Index i = 0; i < nq; ++i) {
                wf(i) = model.quadWeights[size_t(i)] * f[size_t(i)](a, b);
                any = any || wf(i) != cplx(0.0);
            }
            if (!any) continue;
            Mat blk = model.orbitalValues.adjoint() * (wf.asDiagonal() * model.orbitalValues);
            for (Index i = 0; i < nb; ++i)
                for (Index j = 0; j < nb; ++j)
                    if (model.sector[size_t(i)] == model.sector[size_t(j)]) M(2 * i + a, 2 * j + b) = blk(i, j);
        }
    return M;
}

Symbol landau_winding_symbol() {
    Symbol s;
    s.matrixSize = 2;
    s.sampler = [](cplx z) {
        const cplx u = z / std::sqrt(std::norm(z) + 1.0);
        Mat f = Mat::Zero(2, 2);
        f(0, 0) = u;
        f(1, 1) = std::conj(u);
        return f;
    };
    // |u| >= 1/sqrt 2 on |z| >= 1
    s.invertibilityRadius = 1.0;
    s.invertibilityBound = std::sqrt(2.0) + 1e-12;
    return s;
}

Symbol landau_perturbation(double c0, const std::array<double, 3>& c, double rho) {
    if (!(rho > 0.0)) throw InvalidParameter("bump radius must be positive");
    Symbol s;
    s.matrixSize = 2;
    s.sampler = [c0, c, rho](cplx z) {
        Mat f = Mat::Zero(2, 2);
        const double r2 = std::norm(z) / (rho * rho);
        if (r2 >= 1.0) return f;
        const double bump = std::pow(1.0 - r2, 3);
        Mat sv(2, 2);
        sv << cplx(c[2], 0.0), cplx(c[0], -c[1]), cplx(c[0], c[1]), cplx(-c[2], 0.0);
        f = bump * (c0 * Mat::Identity(2, 2) + I_unit * z.imag() * sv);
        return f;
    };
    s.invertibilityRadius = rho;
    s.invertibilityBound = std::numeric_limits<double>::infinity();
    return s;
}

Symbol symbol_sum(const Symbol& a, const Symbol& b) {
    if (a.matrixSize != b.matrixSize) throw DimensionMismatch("symbol sizes differ");
    Symbol s;
    s.matrixSize = a.matrixSize;
    s.sampler = [fa = a.sampler, fb = b.sampler](cplx z) { return Mat(fa(z) + fb(z)); };
    s.invertibilityRadius = std::max(a.invertibilityRadius, b.invertibilityRadius);
    s.invertibilityBound = a.invertibilityBound;
    return s;
}

ToeplitzInstance landau_instance(int levels, int maxM, const Symbol& sym) {
    LandauModel model = build_landau_model(levels, maxM);
    if (model.orthonormalityError > 1e-10) {
        std::ostringstream os;
        os << "orbital quadrature lost orthonormality: " << model.orthonormalityError;
        throw NumericalFailure(os.str());
    }
    const Mat Mf = landau_multiplication(model, sym);
    ToeplitzInstance out{DiscreteOperator{}, model.tau, DiscreteOperator{}, model.tau};
    out.callias.name = "landau_C_M" + std::to_string(maxM);
    out.callias.matrix = to_sparse(to_dense(model.D.matrix) + I_unit * Mf, 0.0);
    out.callias.modelClass = ModelClass::FiniteDifference;
    out.callias.artifactWeight = to_sparse(model.highMWeight);
    const double res = check_odd_symmetric(out.callias.matrix, model.tau);
    if (res > 1e-10) {
        std::ostringstream os;
        os << "C = D + i M_f is not odd symmetric, residual " << res;
        throw SymmetryViolation(os.str());
    }
    KernelProjection proj = certify_gap(model.D, model.tau, KernelPolicy::exact());
    ToeplitzMatrix T = compress(proj, Mf, model.highMWeight);
    out.toeplitz = toeplitz_operator(T, "landau_T_M" + std::to_string(maxM));
    out.toeplitzTau = T.tau;
    return out;
}

}  // namespace z2
