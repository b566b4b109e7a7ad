#include "experiments.hpp"

#include <cmath>

namespace z2::harness {

namespace {

Mat theta2() {
    Mat th(2, 2);
    th << 0.0, 1.0, -1.0, 0.0;
    return th;
}

// The two cylinder fibers used throughout: C^2 with D_N = 0, and the trivial torus.
struct CylinderFiber {
    std::string key;
    DiscreteOperator DN;
    Grading grading;
    AntiUnitary tauN;
};

CylinderFiber zero_fiber() {
    DiscreteOperator DN;
    DN.name = "zero_C2";
    DN.matrix = SpMat(2, 2);
    return {"zero", DN, Grading(std::vector<int>{1, -1}), AntiUnitary(theta2())};
}

CylinderFiber torus_fiber(int K) {
    TorusTrivial T = build_torus_trivial(K);
    return {"torus", T.full, T.grading, T.tau};
}

// dim ker of the grading blocks D_N^+ : E+ -> E- and D_N^- : E- -> E+.
std::pair<int, int> fiber_kernel_dims(const CylinderFiber& f) {
    const KernelPolicy pol = KernelPolicy::exact();
    auto block_dim = [&](int to, int from) {
        SpMat B = f.grading.block(f.DN.matrix, to, from);
        if (B.nonZeros() == 0) return int(B.cols());
        return kernel_dimension(B, pol).kernelDim;
    };
    return {block_dim(-1, 1), block_dim(1, -1)};
}

SpectralReport model_kernel(ExperimentContext& ctx, const std::string& key, const CylinderFiber& f,
                            const Grid1D& grid, int sign, double lambda) {
    ModelOperator M = build_model_operator(f.DN, f.grading, f.tauN, grid, sign, lambda);
    ctx.audit(key + ".oddSymmetry", check_odd_symmetric(M.op.matrix, M.tau), 1e-12);
    ctx.auditTau(key + ".tau", M.tau);
    ctx.q()[key + ".margin"] = num(M.margin.margin);
    return record(ctx, key, M.op, KernelPolicy::finiteDifference());
}

// Line operator d/dt + diag(a(t), a(-t)); this form of Phi is odd symmetric for
// every real a.
LineOperator line_with_profile(const Grid1D& g, std::function<double(double)> a, const std::string& name) {
    return build_line_with_potential(
        g,
        [a](double t) {
            Mat p = Mat::Zero(2, 2);
            p(0, 0) = a(t);
            p(1, 1) = a(-t);
            return p;
        },
        name);
}

double smoothstep(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * (3.0 - 2.0 * x);
}

// Symmetric ±r0 hypersurface copies of the torus in node-major order (mode p
// carries fiber (E+, E-)), with gamma the Clifford action of the outward normal.
BoundaryReduction torus_boundary(const TorusTrivial& T, int sign, double lambda, double r0) {
    const Index M = T.Dplus.cols();
    std::vector<Triplet> perm;
    for (Index p = 0; p < M; ++p) {
        perm.emplace_back(2 * p, p, 1.0);
        perm.emplace_back(2 * p + 1, M + p, 1.0);
    }
    SpMat P(2 * M, 2 * M);
    P.setFromTriplets(perm.begin(), perm.end());
    const SpMat Dn = P * T.full.matrix * SpMat(P.transpose());
    SpMat two = kron(sparse_identity(2), Dn);
    Mat gammaOut = Mat::Zero(2, 2);
    gammaOut(0, 0) = I_unit;
    gammaOut(1, 1) = -I_unit;
    std::vector<Mat> phi, gamma;
    for (int side : {1, -1})
        for (Index p = 0; p < M; ++p) {
            phi.push_back(sign * lambda * model_sign_profile(side * r0) * Mat::Identity(2, 2));
            gamma.push_back(double(side) * gammaOut);
        }
    return boundary_reduction(phi, gamma, two);
}

std::vector<double> sorted_singular_values(const SpMat& m) {
    std::vector<double> s = singular_values(to_dense(m));
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

std::vector<ExperimentInfo> callias_experiments() {
    std::vector<ExperimentInfo> v;

    v.push_back({"admissibility_audit",
                 "a potential admissible everywhere leaves B = D + i Phi without kernel",
                 "Margin examples (arctan, identity, zero) and globally admissible seeded potentials with "
                 "sigma_min^2 compared to the certified margin.",
                 RuntimeClass::Fast,
                 {p_double("arctanHalfLength", 10.0, 2.0, 100.0, "grid half length for the arctan margin"),
                  p_int("arctanNodes", 4001, 101, 40001, "odd node count for the arctan margin"),
                  p_double("arctanTol", 0.01, 0.0, 1.0, "tolerance on the arctan margin"),
                  p_int("potentials", 10, 1, 1000, "globally admissible potentials"),
                  p_double("halfLength", 15.0, 2.0, 100.0, "grid half length for the potentials"),
                  p_int("nodes", 601, 101, 20001, "odd node count for the potentials"),
                  p_int("seed", 13, 0, 1e9, "base seed")},
                 [](ExperimentContext& ctx) {
                     {
                         Grid1D g(ctx.d("arctanHalfLength"), ctx.i("arctanNodes"));
                         LineOperator L = build_line_operator(g);
                         auto [Dp, Dm] = derivative_stencil(g, StencilKind::StaggeredForward);
                         DiscreteOperator D = L.op.withMatrix(SpMat(I_unit * kron(Dp, sparse_identity(2))), "i_d_dt");
                         std::vector<Index> outside;
                         for (Index j = 0; j < g.points(); ++j)
                             if (std::abs(g.coord(j)) >= 1.0 - 1e-12) outside.push_back(j);
                         Potential atan{[](double t) { return Mat(Mat::Constant(1, 1, std::atan(t))); }, 1.0, 0.0};
                         const double expect = std::pow(M_PI / 4.0, 2) - 0.5;
                         MarginReport m = admissibility_margin(D, atan, outside);
                         ctx.q()["arctan"] = {{"margin", num(m.margin)}, {"expected", expect}, {"worstCoord", m.worstCoord}};
                         ctx.check("arctan margin ~ (pi/4)^2 - 1/2", std::abs(m.margin - expect) <= ctx.d("arctanTol"));

                         Potential one{[](double) { return Mat(Mat::Identity(1, 1)); }, 0.0, 0.0};
                         MarginReport m1 = admissibility_margin(D, one, nodes_outside(D, -1.0));
                         ctx.q()["identityMargin"] = num(m1.margin);
                         ctx.check("Phi = I: margin 1", std::abs(m1.margin - 1.0) < 1e-12);

                         Potential zero{[](double) { return Mat(Mat::Zero(1, 1)); }, 0.0, 0.0};
                         bool raised = false;
                         try {
                             admissibility_margin(D, zero, nodes_outside(D, -1.0));
                         } catch (const NotAdmissible&) {
                             raised = true;
                         }
                         ctx.check("Phi = 0: NotAdmissible", raised);
                     }

                     Grid1D g(ctx.d("halfLength"), ctx.i("nodes"));
                     LineOperator base = build_line_operator(g);
                     auto [Dp, Dm] = derivative_stencil(g, StencilKind::StaggeredForward);
                     DiscreteOperator D = base.op.withMatrix(SpMat(I_unit * kron(Dp, sparse_identity(2))), "i_d_dt");
                     std::mt19937_64 rng(static_cast<uint64_t>(ctx.i("seed")));
                     std::uniform_real_distribution<double> uc(0.8, 1.4), ua(0.1, 0.3), uw(0.5, 1.0),
                         uph(0.0, 2.0 * M_PI);
                     json rows = json::array();
                     bool kernelFree = true, bounded = true;
                     double worstSym = 0.0;
                     for (int k = 0; k < ctx.i("potentials"); ++k) {
                         const double c0 = uc(rng), a = ua(rng), w = uw(rng), ph = uph(rng);
                         // p <= -c0 everywhere; Phi = diag(p(t), p(-t)) is odd symmetric
                         auto p = [=](double t) { return -c0 - a * (1.0 + std::sin(w * t + ph)); };
                         Potential phi{[p](double t) {
                                           Mat m = Mat::Zero(2, 2);
                                           m(0, 0) = p(t);
                                           m(1, 1) = p(-t);
                                           return m;
                                       },
                                       -1.0, 0.0};
                         phi = certify_potential(D, phi);
                         DiscreteOperator B = build_callias_ungraded(D, phi, base.tau, "B" + std::to_string(k));
                         worstSym = std::max(worstSym, check_odd_symmetric(B.matrix, base.tau));
                         SpectralReport r = kernel_dimension(B, KernelPolicy::finiteDifference());
                         const double s2 = r.singularValues.front() * r.singularValues.front();
                         rows.push_back({{"margin", num(phi.margin)}, {"sigmaMinSquared", num(s2)}, {"kernelDim", r.kernelDim}});
                         ctx.spectrum("B" + std::to_string(k), r.singularValues);
                         kernelFree = kernelFree && r.kernelDim == 0;
                         bounded = bounded && s2 >= 0.9 * phi.margin;
                     }
                     ctx.audit("B.oddSymmetry", worstSym, 1e-12);
                     ctx.q()["potentials"] = rows;
                     ctx.check("every B has empty kernel", kernelFree);
                     ctx.check("sigma_min^2 >= 0.9 margin", bounded);
                 },
                 [](const json& p) {
                     Grid1D g(p.at("halfLength").get<double>(), p.at("nodes").get<int>());
                     LineOperator base = build_line_operator(g);
                     auto [Dp, Dm] = derivative_stencil(g, StencilKind::StaggeredForward);
                     return std::vector<NamedMatrix>{{"i_d_dt", SpMat(I_unit * kron(Dp, sparse_identity(2)))},
                                                     {"tau_J", base.tau.J()}};
                 }});

    v.push_back({"cylinder_model",
                 "dim ker M_(+/-) = dim ker d_N^(+/-) for the model operator on N x R",
                 "M_(+/-) = D_N (x) 1 + gamma (x) d/dr +/- i tanh(3r) for D_N = 0 on C^2 and the trivial torus.",
                 RuntimeClass::Slow,
                 {p_double("halfLength", 20.0, 5.0, 100.0, "r-grid half length"),
                  p_int("nodes", 1001, 101, 20001, "odd r-node count"),
                  p_int("torusCutoff", 8, 1, 16, "Fourier cutoff of the torus fiber")},
                 [](ExperimentContext& ctx) {
                     Grid1D g(ctx.d("halfLength"), ctx.i("nodes"));
                     bool ok = true;
                     for (const CylinderFiber& f : {zero_fiber(), torus_fiber(ctx.i("torusCutoff"))}) {
                         auto [kp, km] = fiber_kernel_dims(f);
                         ctx.q()[f.key + ".kerDNplus"] = kp;
                         ctx.q()[f.key + ".kerDNminus"] = km;
                         for (int s : {1, -1}) {
                             const std::string key = f.key + (s > 0 ? ".Mplus" : ".Mminus");
                             SpectralReport r = model_kernel(ctx, key, f, g, s, 1.0);
                             ok = ctx.check(key + ": dim ker == dim ker d_N", r.kernelDim == (s > 0 ? kp : km)) && ok;
                         }
                     }
                     ctx.check("model operator identity on both fibers", ok);
                 },
                 [](const json& p) {
                     Grid1D g(p.at("halfLength").get<double>(), p.at("nodes").get<int>());
                     CylinderFiber f = zero_fiber();
                     ModelOperator Mp = build_model_operator(f.DN, f.grading, f.tauN, g, 1);
                     ModelOperator Mm = build_model_operator(f.DN, f.grading, f.tauN, g, -1);
                     return std::vector<NamedMatrix>{{"zero_Mplus", Mp.op.matrix}, {"zero_Mminus", Mm.op.matrix},
                                                     {"tau_J", Mp.tau.J()}};
                 }});

    v.push_back({"callias_t2xR",
                 "ind_tau B_Phi = ind_tau d_(N+)^+ = 1 on T^2 x R, independent of lambda >= 1 and of the sign of Phi",
                 "Model operator over the trivial torus for lambda in {1,2,5} and both signs; the hypersurface "
                 "side comes from boundary reduction at r = +/- r0.",
                 RuntimeClass::Slow,
                 {p_int("torusCutoff", 8, 1, 16, "Fourier cutoff"),
                  p_double("halfLength", 12.0, 5.0, 100.0, "r-grid half length"),
                  p_int("nodes", 501, 101, 20001, "odd r-node count"),
                  p_doubles("lambdas", {1.0, 2.0, 5.0}, 1.0, 100.0, "potential scales"),
                  p_double("r0", 6.0, 0.5, 100.0, "hypersurface position")},
                 [](ExperimentContext& ctx) {
                     const int K = ctx.i("torusCutoff");
                     TorusTrivial T = build_torus_trivial(K);
                     CylinderFiber f = torus_fiber(K);
                     Grid1D g(ctx.d("halfLength"), ctx.i("nodes"));
                     std::vector<int> parities;
                     for (int s : {1, -1}) {
                         const std::string side = s > 0 ? "plus" : "minus";
                         BoundaryReduction br = torus_boundary(T, s, 1.0, ctx.d("r0"));
                         // the reduction must reproduce the torus chiral block it sits on
                         const SpMat& expected = s > 0 ? T.Dplus.matrix : SpMat(T.Dplus.matrix.adjoint());
                         std::vector<double> a = sorted_singular_values(br.reducedPlus.matrix);
                         std::vector<double> b = sorted_singular_values(expected);
                         double dev = a.size() == b.size() ? 0.0 : INFINITY;
                         for (size_t i = 0; i < std::min(a.size(), b.size()); ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
                         ctx.audit("reduction." + side + ".singularValues", dev, 1e-10);
                         SpectralReport rn = kernel_dimension(br.reducedPlus, KernelPolicy::exact());
                         ctx.q()["reduced." + side] = spectral_summary(rn);
                         ctx.q()["indReduced." + side] = z2_index(rn);
                         ctx.check("ind_tau d_(N" + std::string(s > 0 ? "+" : "-") + ") == 1", z2_index(rn) == 1);
                         for (double lam : ctx.dlist("lambdas")) {
                             std::ostringstream key;
                             key << "B." << side << ".lambda" << lam;
                             SpectralReport r = model_kernel(ctx, key.str(), f, g, s, lam);
                             parities.push_back(z2_index(r));
                             ctx.check(key.str() + ": ind_tau B == ind_tau reduced", z2_index(r) == z2_index(rn));
                         }
                     }
                     ctx.q()["parities"] = parities;
                     bool constant = true;
                     for (int p : parities) constant = constant && p == parities.front();
                     ctx.q()["parity"] = parities.front();
                     ctx.check("ind_tau B == 1", parities.front() == 1);
                     ctx.check("parity constant over lambda and sign", constant);
                 },
                 [](const json& p) {
                     CylinderFiber f = torus_fiber(p.at("torusCutoff").get<int>());
                     Grid1D g(p.at("halfLength").get<double>(), p.at("nodes").get<int>());
                     ModelOperator M = build_model_operator(f.DN, f.grading, f.tauN, g, 1, 1.0);
                     return std::vector<NamedMatrix>{{"B", M.op.matrix}, {"tau_J", M.tau.J()}};
                 }});

    v.push_back({"phi_negation",
                 "ind_tau(D + i Phi) = ind_tau(D - i Phi)",
                 "Both signs on the line, the zero-fiber cylinder and the torus cylinder.", RuntimeClass::Medium,
                 {p_double("lineHalfLength", 30.0, 5.0, 200.0, "line grid half length"),
                  p_int("lineNodes", 2001, 101, 20001, "odd line node count"),
                  p_double("cylinderHalfLength", 12.0, 5.0, 100.0, "cylinder half length"),
                  p_int("cylinderNodes", 501, 101, 20001, "odd cylinder node count"),
                  p_int("torusCutoff", 8, 1, 16, "torus Fourier cutoff")},
                 [](ExperimentContext& ctx) {
                     bool ok = true;
                     {
                         Grid1D g(ctx.d("lineHalfLength"), ctx.i("lineNodes"));
                         int par[2];
                         for (int s : {1, -1}) {
                             LineOperator L = build_line_operator(g, s);
                             ctx.audit(std::string("line.") + (s > 0 ? "plus" : "minus") + ".oddSymmetry",
                                       check_odd_symmetric(L.op.matrix, L.tau), 1e-12);
                             par[s > 0 ? 0 : 1] =
                                 z2_index(record(ctx, s > 0 ? "line.plus" : "line.minus", L.op, KernelPolicy::finiteDifference()));
                         }
                         ok = ctx.check("line: equal parities", par[0] == par[1]) && ok;
                     }
                     Grid1D g(ctx.d("cylinderHalfLength"), ctx.i("cylinderNodes"));
                     for (const CylinderFiber& f : {zero_fiber(), torus_fiber(ctx.i("torusCutoff"))}) {
                         const int a = z2_index(model_kernel(ctx, f.key + ".plus", f, g, 1, 1.0));
                         const int b = z2_index(model_kernel(ctx, f.key + ".minus", f, g, -1, 1.0));
                         ok = ctx.check(f.key + ": equal parities", a == b) && ok;
                     }
                     ctx.check("sign of Phi does not change ind_tau", ok);
                 },
                 [](const json& p) {
                     Grid1D g(p.at("lineHalfLength").get<double>(), p.at("lineNodes").get<int>());
                     LineOperator a = build_line_operator(g, 1.0), b = build_line_operator(g, -1.0);
                     return std::vector<NamedMatrix>{{"line_plus", a.op.matrix}, {"line_minus", b.op.matrix},
                                                     {"tau_J", a.tau.J()}};
                 }});

    v.push_back({"lambda_phi_sweep",
                 "ind_tau(D + i lambda Phi) is independent of lambda >= 1",
                 "lambda sweep on the line and the zero-fiber cylinder.", RuntimeClass::Fast,
                 {p_doubles("lambdas", {1.0, 2.0, 5.0}, 1.0, 100.0, "potential scales"),
                  p_double("lineHalfLength", 30.0, 5.0, 200.0, "line grid half length"),
                  p_int("lineNodes", 2001, 101, 20001, "odd line node count"),
                  p_double("cylinderHalfLength", 20.0, 5.0, 100.0, "cylinder half length"),
                  p_int("cylinderNodes", 1001, 101, 20001, "odd cylinder node count")},
                 [](ExperimentContext& ctx) {
                     Grid1D gl(ctx.d("lineHalfLength"), ctx.i("lineNodes"));
                     Grid1D gc(ctx.d("cylinderHalfLength"), ctx.i("cylinderNodes"));
                     CylinderFiber f = zero_fiber();
                     std::vector<int> line, cyl;
                     for (double lam : ctx.dlist("lambdas")) {
                         std::ostringstream k;
                         k << "lambda" << lam;
                         LineOperator L = line_with_profile(gl, [lam](double t) { return lam * std::atan(t); },
                                                            "line_" + k.str());
                         ctx.audit("line." + k.str() + ".oddSymmetry", check_odd_symmetric(L.op.matrix, L.tau), 1e-12);
                         line.push_back(z2_index(record(ctx, "line." + k.str(), L.op, KernelPolicy::finiteDifference())));
                         cyl.push_back(z2_index(model_kernel(ctx, "zero." + k.str(), f, gc, 1, lam)));
                     }
                     ctx.q()["lineParities"] = line;
                     ctx.q()["cylinderParities"] = cyl;
                     auto constant = [](const std::vector<int>& p) {
                         for (int x : p)
                             if (x != p.front()) return false;
                         return true;
                     };
                     ctx.check("line parity constant in lambda", constant(line));
                     ctx.check("cylinder parity constant in lambda", constant(cyl));
                 },
                 [](const json& p) {
                     Grid1D g(p.at("lineHalfLength").get<double>(), p.at("lineNodes").get<int>());
                     const double lam = p.at("lambdas").get<std::vector<double>>().back();
                     LineOperator L = line_with_profile(g, [lam](double t) { return lam * std::atan(t); }, "line");
                     return std::vector<NamedMatrix>{{"line_max_lambda", L.op.matrix}, {"tau_J", L.tau.J()}};
                 }});

    v.push_back({"relative_index_1d",
                 "relative index theorem: ind_0 + ind_1 = ind_2 + ind_3 mod 2 after cut and paste",
                 "Two line potentials equal to a constant near the cut pair {-c, c} with seeded interiors and tail signs; "
                 "surgery swaps the outside parts.",
                 RuntimeClass::Fast,
                 {p_int("configurations", 5, 1, 1000, "seeded configurations"),
                  p_double("halfLength", 15.0, 5.0, 100.0, "grid half length"),
                  p_int("nodes", 601, 101, 20001, "odd node count"),
                  p_double("cut", 5.0, 1.0, 50.0, "cut position c"),
                  p_double("tailAmplitude", 1.5, 0.1, 10.0, "|Phi| at infinity"),
                  p_double("plateau", 0.3, 0.01, 10.0, "value of a around the cut pair"),
                  p_int("seed", 17, 0, 1e9, "base seed")},
                 [](ExperimentContext& ctx) {
                     Grid1D g(ctx.d("halfLength"), ctx.i("nodes"));
                     const double c = ctx.d("cut"), A = ctx.d("tailAmplitude"), a0 = ctx.d("plateau");
                     std::mt19937_64 rng(static_cast<uint64_t>(ctx.i("seed")));
                     // Three bumps of size <= a0/4 keep a > 0 inside, so only the tails decide the
                     // kernel. A low plateau keeps the kink/antikink pair of (-,-) tails split well
                     // above the cut instead of exponentially close to zero.
                     std::uniform_real_distribution<double> ub(-0.25 * a0, 0.25 * a0), um(-c + 1.0, c - 1.0);
                     std::bernoulli_distribution coin(0.5);
                     // a = a0 on a band around |t| = c; seeded bumps inside, signed tails outside
                     auto profile = [&](bool randomTails) {
                         std::vector<std::pair<double, double>> bumps;
                         for (int i = 0; i < 3; ++i) bumps.emplace_back(ub(rng), um(rng));
                         const double sp = randomTails ? (coin(rng) ? 1.0 : -1.0) : 1.0;
                         const double sm = randomTails ? (coin(rng) ? 1.0 : -1.0) : -1.0;
                         return [=](double t) {
                             const double in = 1.0 - smoothstep(std::abs(t) - (c - 1.5));
                             const double out = smoothstep(std::abs(t) - (c + 0.5));
                             double p = 0.0;
                             for (auto [b, mu] : bumps) p += b * std::exp(-(t - mu) * (t - mu));
                             return a0 + in * p + out * ((t > 0 ? sp : sm) * A - a0);
                         };
                     };
                     json rows = json::array();
                     bool even = true, identity = true;
                     double worstSym = 0.0;
                     for (int k = 0; k < ctx.i("configurations"); ++k) {
                         LineOperator L0 = line_with_profile(g, profile(false), "op0");
                         LineOperator L1 = line_with_profile(g, profile(true), "op1");
                         auto [op2, op3] = cut_and_paste(L0.op, L1.op, c, L0.tau);
                         auto [same2, same3] = cut_and_paste(L0.op, L0.op, c, L0.tau);
                         identity = identity && frobenius(SpMat(same2.matrix - L0.op.matrix)) == 0.0 &&
                                    frobenius(SpMat(same3.matrix - L0.op.matrix)) == 0.0;
                         int dims[4], sum = 0;
                         const DiscreteOperator* ops[4] = {&L0.op, &L1.op, &op2, &op3};
                         for (int i = 0; i < 4; ++i) {
                             worstSym = std::max(worstSym, check_odd_symmetric(ops[i]->matrix, L0.tau));
                             const std::string key = "config" + std::to_string(k) + ".op" + std::to_string(i);
                             dims[i] = record(ctx, key, *ops[i], KernelPolicy::finiteDifference()).kernelDim;
                             sum += dims[i];
                         }
                         rows.push_back({{"kernelDims", {dims[0], dims[1], dims[2], dims[3]}}, {"sumParity", sum % 2}});
                         even = even && sum % 2 == 0;
                     }
                     ctx.audit("oddSymmetry", worstSym, 1e-12);
                     ctx.q()["configurations"] = rows;
                     ctx.check("surgery with op0 = op1 returns op0", identity);
                     ctx.check("ind_0 + ind_1 + ind_2 + ind_3 == 0 mod 2", even);
                 },
                 [](const json& p) {
                     Grid1D g(p.at("halfLength").get<double>(), p.at("nodes").get<int>());
                     LineOperator L = build_line_operator(g);
                     return std::vector<NamedMatrix>{{"op0", L.op.matrix}, {"tau_J", L.tau.J()}};
                 }});
    return v;
}

}  // namespace z2::harness
