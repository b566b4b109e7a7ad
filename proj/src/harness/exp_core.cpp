#include "experiments.hpp"

#include <cmath>

namespace z2::harness {

namespace {

// J' = U J U^T stays unitary and antisymmetric for unitary U.
AntiUnitary random_tau(std::mt19937_64& rng, Index n) {
    Eigen::HouseholderQR<Mat> qr(random_complex(rng, n, n));
    Mat U = qr.householderQ();
    return AntiUnitary(Mat(U * make_standard_J(n / 2).denseJ() * U.transpose()));
}

}  // namespace

std::vector<ExperimentInfo> core_experiments() {
    std::vector<ExperimentInfo> v;

    v.push_back({"kramers_random",
                 "tau-invariant eigenspaces are even dimensional (Kramers degeneracy)",
                 "Seeded random odd symmetric D (multiplicities of D^†D away from 0) and tau-commuting Hermitian H.",
                 RuntimeClass::Fast,
                 {p_int("count", 50, 1, 10000, "matrices per family"),
                  p_int("maxDim", 40, 2, 400, "largest (even) dimension"),
                  p_double("relTol", 1e-8, 1e-14, 1e-2, "eigenvalue clustering tolerance relative to the radius"),
                  p_int("seed", 3, 0, 1e9, "base seed")},
                 [](ExperimentContext& ctx) {
                     std::mt19937_64 rng(static_cast<uint64_t>(ctx.i("seed")));
                     std::uniform_int_distribution<int> half(1, ctx.i("maxDim") / 2);
                     int oddFound = 0, clusters = 0, multiple = 0;
                     double worstSym = 0.0;
                     for (int family = 0; family < 2; ++family)
                         for (int k = 0; k < ctx.i("count"); ++k) {
                             const Index n = 2 * half(rng);
                             AntiUnitary tau = random_tau(rng, n);
                             ctx.auditTau("tau", tau);
                             Mat A = random_complex(rng, n, n);
                             KramersCertificate c;
                             if (family == 0) {
                                 c = kramers_multiplicity_check(symmetrize_odd(A, tau), tau, KramersMode::SquaredOffDiagonal,
                                                                ctx.d("relTol"));
                             } else {
                                 Mat H = 0.5 * (A + A.adjoint());
                                 Mat J = tau.denseJ();
                                 H = 0.5 * (H + J * H.conjugate() * J.adjoint());
                                 c = kramers_multiplicity_check(H, tau, KramersMode::Commuting, ctx.d("relTol"));
                             }
                             worstSym = std::max(worstSym, c.symmetryResidual);
                             oddFound += c.allEven ? 0 : 1;
                             clusters += int(c.clusters.size());
                             for (const auto& cl : c.clusters) multiple += cl.multiplicity >= 2;
                         }
                     ctx.audit("precondition", worstSym, 1e-10);
                     ctx.q()["matrices"] = 2 * ctx.i("count");
                     ctx.q()["clusters"] = clusters;
                     ctx.q()["clustersWithMultiplicityAtLeast2"] = multiple;
                     ctx.q()["matricesWithOddCluster"] = oddFound;
                     ctx.check("every nonzero eigenvalue cluster has even multiplicity", oddFound == 0);
                 },
                 [](const json& p) {
                     std::mt19937_64 rng(static_cast<uint64_t>(p.at("seed").get<int>()));
                     const Index n = 2 * (p.at("maxDim").get<int>() / 2);
                     AntiUnitary tau = random_tau(rng, n);
                     Mat D = symmetrize_odd(random_complex(rng, n, n), tau);
                     return std::vector<NamedMatrix>{{"D", to_sparse(D)}, {"tau_J", tau.J()}};
                 }});

    v.push_back({"gap_certify",
                 "zero is isolated in the spectrum of a gapped odd symmetric self-adjoint operator",
                 "Kernel projections and gap certificates for small exact cases, the flux torus and the Landau model.",
                 RuntimeClass::Medium,
                 {p_int("fluxLattice", 16, 4, 64, "flux torus sites per direction"),
                  p_double("r", 0.5, 0.0, 10.0, "Wilson parameter"),
                  p_int("landauM", 8, 1, 40, "Landau angular momentum cutoff")},
                 [](ExperimentContext& ctx) {
                     Mat th(2, 2);
                     th << 0.0, 1.0, -1.0, 0.0;
                     {
                         Mat J = Mat::Zero(4, 4);
                         J.block(0, 0, 2, 2) = th;
                         J.block(2, 2, 2, 2) = th;
                         DiscreteOperator D;
                         D.name = "diag0022";
                         D.matrix = to_sparse(Eigen::Vector4cd(0, 0, 2, 2).asDiagonal().toDenseMatrix());
                         KernelProjection kp = certify_gap(D, AntiUnitary(J), KernelPolicy::exact());
                         ctx.q()["diag0022"] = {{"kernelDim", kp.gap.kernelDim}, {"gamma", num(kp.gap.gamma)}};
                         ctx.check("diag(0,0,2,2): kernel 2, gamma 2",
                                   kp.gap.kernelDim == 2 && std::abs(kp.gap.gamma - 2.0) < 1e-12);
                     }
                     {
                         DiscreteOperator I;
                         I.name = "identity";
                         I.matrix = sparse_identity(4);
                         KernelProjection kp = certify_gap(I, make_standard_J(2), KernelPolicy::exact());
                         ctx.q()["identity"] = {{"kernelDim", kp.gap.kernelDim}, {"gamma", num(kp.gap.gamma)}};
                         ctx.check("identity: kernel 0 and no NoGap", kp.gap.kernelDim == 0 && kp.gap.isolated);
                     }
                     {
                         const int L = ctx.i("fluxLattice");
                         FluxTorus F = build_torus_flux(2, make_flux_lattice(L, L, 2), ctx.d("r"));
                         ctx.audit("flux.D.oddSymmetry", check_odd_symmetric(F.full.matrix, F.tau), 1e-12);
                         KernelProjection kp = certify_gap(F.full, F.tau, KernelPolicy::finiteDifference());
                         ctx.auditTau("flux.kernelTau", *kp.tau);
                         ctx.q()["fluxTorus"] = {{"kernelDim", kp.gap.kernelDim}, {"gamma", num(kp.gap.gamma)}};
                         ctx.check("flux n=2 graded D: kernel 4, gamma > 0", kp.gap.kernelDim == 4 && kp.gap.gamma > 0);
                     }
                     {
                         const int M = ctx.i("landauM");
                         LandauModel m = build_landau_model(std::max(2, M / 4), M);
                         KernelProjection kp = certify_gap(m.D, m.tau, KernelPolicy::exact());
                         ctx.auditTau("landau.kernelTau", *kp.tau);
                         ctx.q()["landau"] = {{"kernelDim", kp.gap.kernelDim}, {"gamma", num(kp.gap.gamma)}};
                         ctx.check("Landau D: kernel = lowest level x C^2, gamma = sqrt 2",
                                   kp.gap.kernelDim == 2 * (M + 1) && std::abs(kp.gap.gamma - std::sqrt(2.0)) < 1e-10);
                     }
                 },
                 [](const json& p) {
                     const int L = p.at("fluxLattice").get<int>();
                     FluxTorus F = build_torus_flux(2, make_flux_lattice(L, L, 2), p.at("r").get<double>());
                     return std::vector<NamedMatrix>{{"flux_D", F.full.matrix}, {"flux_tau_J", F.tau.J()}};
                 }});
    return v;
}

}  // namespace z2::harness
