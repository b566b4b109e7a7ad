#include "experiments.hpp"

#include <cmath>

namespace z2::harness {

namespace {

const std::vector<ParamSpec> kLineGrid = {
    p_double("halfLength", 30.0, 5.0, 200.0, "grid covers [-L, L]"),
    p_int("nodes", 2001, 101, 20001, "odd number of grid nodes"),
    p_double("boundaryLayer", 5.0, 0.5, 50.0, "width of the truncation layer that carries the artifact weight"),
};

void line_checks(ExperimentContext& ctx, const LineOperator& L, bool normalizationBounds) {
    ctx.audit("D.oddSymmetry", check_odd_symmetric(L.op.matrix, L.tau), 1e-12);
    ctx.auditTau("tau", L.tau);
    SpectralReport r = record(ctx, "D", L.op, KernelPolicy::finiteDifference());
    ctx.q()["parity"] = z2_index(r);
    ctx.check("parity == 1", z2_index(r) == 1);
    ctx.check("kernelDim == 1", r.kernelDim == 1);
    if (!normalizationBounds) return;
    // sigma_1: residual of the physical zero mode; sigma_2: next value of the deflated spectrum
    std::vector<double> dv = r.deflatedValues();
    const double s1 = r.kernelDim >= 1 ? dv[0] : INFINITY;
    const double s2 = dv.size() > 1 ? dv[1] : INFINITY;
    ctx.q()["sigma1"] = num(s1);
    ctx.q()["sigma2"] = num(s2);
    ctx.q()["sigmaRatio"] = num(s2 / s1);
    ctx.check("sigma1 < 1e-6", s1 < 1e-6);
    ctx.check("sigma2/sigma1 >= 1e4", s2 / s1 >= 1e4);
}

std::vector<NamedMatrix> line_export(const json& p, bool withV) {
    Grid1D g(p.at("halfLength").get<double>(), p.at("nodes").get<int>());
    LineOperator L = withV ? build_example_line_with_V(g, p.at("boundaryLayer").get<double>())
                           : build_line_operator(g, 1.0, p.at("boundaryLayer").get<double>());
    return {{"D", L.op.matrix}, {"tau_J", L.tau.J()}, {"artifact_weight", L.op.artifactWeight}};
}

// Node-diagonal random fiber matrices on |t| <= support, made odd symmetric.
SpMat compact_node_perturbation(const Grid1D& g, const AntiUnitary& tau, double support, double amp,
                                std::mt19937_64& rng) {
    std::vector<Triplet> t;
    for (Index j = 0; j < g.points(); ++j) {
        if (std::abs(g.coord(j)) > support) continue;
        Mat b = amp * random_complex(rng, 2, 2);
        for (int a = 0; a < 2; ++a)
            for (int c = 0; c < 2; ++c) t.emplace_back(2 * j + a, 2 * j + c, b(a, c));
    }
    SpMat K(2 * g.points(), 2 * g.points());
    K.setFromTriplets(t.begin(), t.end());
    return symmetrize_odd(K, tau);
}

}  // namespace

std::vector<ExperimentInfo> line_experiments() {
    std::vector<ExperimentInfo> v;

    v.push_back({"line_normalization",
                 "ind_tau(d/dt + diag(arctan t, -arctan t)) = 1 on the line",
                 "Staggered forward difference with boundary-layer deflation; reports sigma_1, sigma_2 and the parity.",
                 RuntimeClass::Fast, kLineGrid,
                 [](ExperimentContext& ctx) {
                     Grid1D g(ctx.d("halfLength"), ctx.i("nodes"));
                     line_checks(ctx, build_line_operator(g, 1.0, ctx.d("boundaryLayer")), true);
                 },
                 [](const json& p) { return line_export(p, false); }});

    v.push_back({"example_line_with_V",
                 "i d/dt + i diag(arctan t, -arctan t) has one-dimensional kernel",
                 "The unit multiple i(d/dt + V) of the normalization operator.", RuntimeClass::Fast, kLineGrid,
                 [](ExperimentContext& ctx) {
                     Grid1D g(ctx.d("halfLength"), ctx.i("nodes"));
                     line_checks(ctx, build_example_line_with_V(g, ctx.d("boundaryLayer")), true);
                 },
                 [](const json& p) { return line_export(p, true); }});

    v.push_back({"homotopy_path",
                 "ind_tau(D + tK) is constant in t for compactly supported odd symmetric K",
                 "Parity sweep along D + tK, t = 0..1, on the line model for seeded node-diagonal K.",
                 RuntimeClass::Medium,
                 {p_double("halfLength", 15.0, 5.0, 100.0, "grid half length"),
                  p_int("nodes", 601, 101, 10001, "odd node count"),
                  p_int("paths", 10, 1, 1000, "number of seeded perturbations"),
                  p_int("steps", 10, 1, 1000, "steps per path"),
                  p_double("support", 2.0, 0.0, 100.0, "K vanishes on |t| > support"),
                  p_double("amplitude", 1.0, 0.0, 100.0, "entry scale of K"),
                  p_int("seed", 7, 0, 1e9, "base seed")},
                 [](ExperimentContext& ctx) {
                     Grid1D g(ctx.d("halfLength"), ctx.i("nodes"));
                     LineOperator L = build_line_operator(g);
                     ctx.audit("D.oddSymmetry", check_odd_symmetric(L.op.matrix, L.tau), 1e-12);
                     ctx.auditTau("tau", L.tau);
                     const int steps = ctx.i("steps");
                     int flips = 0;
                     json all = json::array();
                     bool allOne = true;
                     for (int p = 0; p < ctx.i("paths"); ++p) {
                         std::mt19937_64 rng(static_cast<uint64_t>(ctx.i("seed")) * 1000003ULL + uint64_t(p));
                         SpMat K = compact_node_perturbation(g, L.tau, ctx.d("support"), ctx.d("amplitude"), rng);
                         std::vector<DiscreteOperator> path;
                         for (int s = 0; s <= steps; ++s)
                             path.push_back(L.op.withMatrix(SpMat(L.op.matrix + (double(s) / steps) * K),
                                                            "path" + std::to_string(p) + "_step" + std::to_string(s)));
                         const double bound = frobenius(K) / steps * (1.0 + 1e-9) + 1e-14;
                         std::vector<int> par =
                             homotopy_parity_sweep(path, L.tau, KernelPolicy::finiteDifference(), bound);
                         for (size_t s = 1; s < par.size(); ++s) flips += par[s] != par[s - 1];
                         for (int x : par) allOne = allOne && x == 1;
                         all.push_back(par);
                     }
                     ctx.q()["parities"] = all;
                     ctx.q()["flips"] = flips;
                     ctx.check("zero parity flips", flips == 0);
                     ctx.check("parity 1 along every path", allOne);
                 },
                 [](const json& p) {
                     Grid1D g(p.at("halfLength").get<double>(), p.at("nodes").get<int>());
                     LineOperator L = build_line_operator(g);
                     std::mt19937_64 rng(static_cast<uint64_t>(p.at("seed").get<int>()) * 1000003ULL);
                     SpMat K = compact_node_perturbation(g, L.tau, p.at("support").get<double>(),
                                                         p.at("amplitude").get<double>(), rng);
                     return std::vector<NamedMatrix>{{"D", L.op.matrix}, {"K_path0", K}, {"tau_J", L.tau.J()}};
                 }});

    v.push_back({"compact_perturbation",
                 "ind_tau(D + K) = ind_tau(D) for compact odd symmetric K",
                 "Dense random odd symmetric block on a window around 0 added with weights t.", RuntimeClass::Medium,
                 {p_double("halfLength", 10.0, 5.0, 100.0, "grid half length"),
                  p_int("nodes", 401, 101, 10001, "odd node count"),
                  p_double("window", 0.5, 0.0, 10.0, "K is a dense block on nodes with |t| <= window"),
                  p_int("seeds", 10, 1, 1000, "number of seeded blocks"),
                  p_double("amplitude", 0.5, 0.0, 100.0, "entry scale"),
                  p_doubles("tvalues", {0.0, 0.25, 0.5, 0.75, 1.0}, 0.0, 10.0, "perturbation weights"),
                  p_int("seed", 11, 0, 1e9, "base seed")},
                 [](ExperimentContext& ctx) {
                     Grid1D g(ctx.d("halfLength"), ctx.i("nodes"));
                     LineOperator L = build_line_operator(g);
                     ctx.audit("D.oddSymmetry", check_odd_symmetric(L.op.matrix, L.tau), 1e-12);
                     std::vector<Index> win;
                     for (Index j = 0; j < g.points(); ++j)
                         if (std::abs(g.coord(j)) <= ctx.d("window")) win.push_back(j);
                     json all = json::array();
                     bool constant = true;
                     double worstRes = 0.0;
                     for (int s = 0; s < ctx.i("seeds"); ++s) {
                         std::mt19937_64 rng(static_cast<uint64_t>(ctx.i("seed")) * 7919ULL + uint64_t(s));
                         const Index w = Index(win.size()) * 2;
                         Mat blk = ctx.d("amplitude") * random_complex(rng, w, w);
                         std::vector<Triplet> t;
                         for (Index a = 0; a < w; ++a)
                             for (Index b = 0; b < w; ++b)
                                 t.emplace_back(2 * win[size_t(a / 2)] + a % 2, 2 * win[size_t(b / 2)] + b % 2, blk(a, b));
                         SpMat K(L.op.rows(), L.op.cols());
                         K.setFromTriplets(t.begin(), t.end());
                         K = symmetrize_odd(K, L.tau);
                         json par = json::array();
                         for (double tv : ctx.dlist("tvalues")) {
                             DiscreteOperator op = L.op.withMatrix(SpMat(L.op.matrix + tv * K), "D+tK");
                             worstRes = std::max(worstRes, check_odd_symmetric(op.matrix, L.tau));
                             const int p = z2_index(analyze_kernel(op, KernelPolicy::finiteDifference()).report);
                             par.push_back(p);
                             constant = constant && p == 1;
                         }
                         all.push_back(par);
                     }
                     ctx.audit("perturbed.oddSymmetry", worstRes, 1e-10);
                     ctx.q()["parities"] = all;
                     ctx.check("parity 1 for every perturbation", constant);
                 },
                 [](const json& p) {
                     Grid1D g(p.at("halfLength").get<double>(), p.at("nodes").get<int>());
                     LineOperator L = build_line_operator(g);
                     return std::vector<NamedMatrix>{{"D", L.op.matrix}, {"tau_J", L.tau.J()}};
                 }});

    v.push_back({"vanishing_compact_circle",
                 "odd symmetric operators on a compact odd-dimensional involutive manifold have even kernel",
                 "Periodic circle: tau-compatible gauge conjugates of d/dt (kernel 2) and random odd symmetric "
                 "potential perturbations.",
                 RuntimeClass::Fast,
                 {p_int("nodes", 201, 11, 10001, "odd node count on the circle of length 2 pi"),
                  p_int("gauges", 10, 0, 1000, "number of gauge conjugations"),
                  p_int("perturbations", 10, 0, 1000, "number of potential perturbations"),
                  p_double("amplitude", 0.5, 0.0, 100.0, "potential entry scale"),
                  p_int("seed", 5, 0, 1e9, "base seed")},
                 [](ExperimentContext& ctx) {
                     Grid1D g(M_PI, ctx.i("nodes"), true);
                     auto [Dp, Dm] = derivative_stencil(g, StencilKind::StaggeredForward);
                     const AntiUnitary tau = line_tau(g);
                     ctx.auditTau("tau", tau);
                     DiscreteOperator D0;
                     D0.name = "circle_d";
                     D0.matrix = kron(Dp, sparse_identity(2));
                     D0.modelClass = ModelClass::FiniteDifference;
                     D0.coords = g.coords();
                     D0.fiberDim = 2;
                     Mat theta(2, 2);
                     theta << 0.0, 1.0, -1.0, 0.0;
                     std::mt19937_64 rng(static_cast<uint64_t>(ctx.i("seed")));
                     json dims = json::array();
                     bool even = true, gaugeTwo = true;
                     double worst = check_odd_symmetric(D0.matrix, tau);
                     std::vector<int> kernels;
                     for (int k = 0; k < ctx.i("gauges"); ++k) {
                         // U(-t) = theta conj(U(t)) theta^† with U = exp(iH): H(-t) = -theta conj(H(t)) theta^†
                         const Index n = g.points(), m = g.m();
                         std::vector<Mat> H(static_cast<size_t>(n));
                         for (Index j = m; j < n; ++j) {
                             Mat a = random_complex(rng, 2, 2);
                             Mat h = 0.5 * (a + a.adjoint());
                             if (j == m) h -= 0.5 * h.trace() * Mat::Identity(2, 2);
                             H[size_t(j)] = h;
                             H[size_t(g.mirror(j))] = -theta * h.conjugate() * theta.adjoint();
                         }
                         std::vector<Triplet> t;
                         for (Index j = 0; j < n; ++j) {
                             Eigen::SelfAdjointEigenSolver<Mat> es(H[size_t(j)]);
                             Mat U = es.eigenvectors() *
                                     es.eigenvalues().unaryExpr([](double x) { return std::polar(1.0, x); }).asDiagonal() *
                                     es.eigenvectors().adjoint();
                             for (int a = 0; a < 2; ++a)
                                 for (int b = 0; b < 2; ++b) t.emplace_back(2 * j + a, 2 * j + b, U(a, b));
                         }
                         SpMat U(2 * n, 2 * n);
                         U.setFromTriplets(t.begin(), t.end());
                         DiscreteOperator op = D0.withMatrix(SpMat(U * D0.matrix * SpMat(U.adjoint())),
                                                             "gauge" + std::to_string(k));
                         worst = std::max(worst, check_odd_symmetric(op.matrix, tau));
                         const int kd = analyze_kernel(op, KernelPolicy::finiteDifference()).report.kernelDim;
                         kernels.push_back(kd);
                         even = even && kd % 2 == 0;
                         gaugeTwo = gaugeTwo && kd == 2;
                     }
                     for (int k = 0; k < ctx.i("perturbations"); ++k) {
                         std::vector<Triplet> t;
                         for (Index j = 0; j < g.points(); ++j) {
                             Mat b = ctx.d("amplitude") * random_complex(rng, 2, 2);
                             for (int a = 0; a < 2; ++a)
                                 for (int c = 0; c < 2; ++c) t.emplace_back(2 * j + a, 2 * j + c, b(a, c));
                         }
                         SpMat K(D0.rows(), D0.cols());
                         K.setFromTriplets(t.begin(), t.end());
                         DiscreteOperator op = D0.withMatrix(SpMat(D0.matrix + symmetrize_odd(K, tau)),
                                                             "perturbed" + std::to_string(k));
                         worst = std::max(worst, check_odd_symmetric(op.matrix, tau));
                         const int kd = analyze_kernel(op, KernelPolicy::finiteDifference()).report.kernelDim;
                         kernels.push_back(kd);
                         even = even && kd % 2 == 0;
                     }
                     ctx.audit("oddSymmetry", worst, 1e-10);
                     ctx.q()["kernelDims"] = kernels;
                     ctx.check("every kernel even", even);
                     ctx.check("gauge conjugates keep kernel 2", gaugeTwo);
                 },
                 [](const json& p) {
                     Grid1D g(M_PI, p.at("nodes").get<int>(), true);
                     auto [Dp, Dm] = derivative_stencil(g, StencilKind::StaggeredForward);
                     return std::vector<NamedMatrix>{{"D", kron(Dp, sparse_identity(2))}, {"tau_J", line_tau(g).J()}};
                 }});
    return v;
}

}  // namespace z2::harness
