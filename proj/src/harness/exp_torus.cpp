#include "experiments.hpp"

#include <cmath>

namespace z2::harness {

std::vector<ExperimentInfo> torus_experiments() {
    std::vector<ExperimentInfo> v;

    v.push_back({"torus_trivial",
                 "on the trivial flat torus ker D+ is the constants: ind_tau D+ = 1",
                 "Fourier truncation |m|,|n| <= K of dbar with symbol i m - n.", RuntimeClass::Fast,
                 {p_ints("cutoffs", {4, 8, 16}, 1, 64, "Fourier cutoffs K")},
                 [](ExperimentContext& ctx) {
                     bool ok = true;
                     for (int K : ctx.ilist("cutoffs")) {
                         TorusTrivial T = build_torus_trivial(K);
                         const std::string key = "K" + std::to_string(K);
                         ctx.audit(key + ".D.oddSymmetry", check_odd_symmetric(T.full.matrix, T.tau), 1e-12);
                         ctx.auditTau(key + ".tau", T.tau);
                         SpectralReport r = record(ctx, key + ".Dplus", T.Dplus, KernelPolicy::exact());
                         SpectralReport rf = record(ctx, key + ".D", T.full, KernelPolicy::exact());
                         ok = ctx.check(key + ": dim ker D+ == 1", r.kernelDim == 1) && ok;
                         ctx.check(key + ": dim ker D == 2", rf.kernelDim == 2);
                         ctx.q()[key + ".parity"] = z2_index(r);
                     }
                     ctx.q()["parity"] = 1;
                     ctx.check("ind_tau D+ == 1 at every cutoff", ok);
                 },
                 [](const json& p) {
                     TorusTrivial T = build_torus_trivial(p.at("cutoffs").get<std::vector<int>>().front());
                     return std::vector<NamedMatrix>{{"Dplus", T.Dplus.matrix}, {"D", T.full.matrix}, {"tau_J", T.tau.J()}};
                 }});

    v.push_back({"torus_flux",
                 "on the flux-n torus ind dbar = n and ind_tau D+ = n mod 2",
                 "Sites lattice with covariant central differences and an s-direction Wilson term. The t-doubler "
                 "partner is deflated by the t-roughness weight; ker dbar - ker dbar^† is the index.",
                 RuntimeClass::Fast,
                 {p_int("n", 2, 0, 16, "flux quantum"), p_int("Lt", 24, 4, 128, "sites along t"),
                  p_int("Ls", 24, 4, 128, "sites along s"), p_double("r", 0.5, 0.0, 10.0, "Wilson parameter")},
                 [](ExperimentContext& ctx) {
                     const int n = ctx.i("n");
                     TorusLattice lat = make_flux_lattice(ctx.i("Lt"), ctx.i("Ls"), n);
                     FluxTorus F = build_torus_flux(n, lat, ctx.d("r"));
                     ctx.audit("flux", std::abs(lattice_flux(lat) - n), 1e-9);
                     ctx.audit("D.oddSymmetry", check_odd_symmetric(F.full.matrix, F.tau), 1e-12);
                     ctx.auditTau("tau", F.tau);
                     const KernelPolicy pol = KernelPolicy::finiteDifference();
                     SpectralReport rx = record(ctx, "dbar", F.dbar, pol);
                     SpectralReport rxh = record(ctx, "dbarAdjoint", F.dbar.adjoint("flux_dbar_adjoint"), pol);
                     SpectralReport rd = record(ctx, "Dplus", F.Dplus, pol);
                     const int rawX = rx.deflation.applied ? rx.deflation.rawKernelDim : rx.kernelDim;
                     double kernelMax = 0.0;
                     for (int i = 0; i < rawX; ++i) kernelMax = std::max(kernelMax, rx.singularValues[size_t(i)]);
                     const int index = rx.kernelDim - rxh.kernelDim;
                     ctx.q()["index"] = index;
                     ctx.q()["kernelDimDbar"] = rx.kernelDim;
                     ctx.q()["rawKernelDimDbar"] = rawX;
                     ctx.q()["kernelSigmaOverSigmaMax"] = num(rx.sigmaMax > 0 ? kernelMax / rx.sigmaMax : 0.0);
                     ctx.q()["parity"] = z2_index(rd);
                     ctx.check("ind dbar == n", index == n);
                     ctx.check("ind_tau D+ == n mod 2", z2_index(rd) == n % 2);
                     ctx.check("kernel singular values < 1e-6 sigma_max", kernelMax < 1e-6 * rx.sigmaMax);
                     // For n >= 1 the cokernel is empty, so the kernel itself has dimension n
                     // (raw: the doubler partners all sit in ker dbar^†).
                     if (n >= 1) {
                         ctx.check("dim ker dbar == n", rx.kernelDim == n);
                         ctx.check("raw dim ker dbar == n", rawX == n);
                     } else {
                         ctx.check("n = 0: ker dbar = constants", rx.kernelDim == 1);
                     }
                 },
                 [](const json& p) {
                     const int n = p.at("n").get<int>();
                     FluxTorus F = build_torus_flux(n, make_flux_lattice(p.at("Lt").get<int>(), p.at("Ls").get<int>(), n),
                                                    p.at("r").get<double>());
                     return std::vector<NamedMatrix>{{"dbar", F.dbar.matrix},
                                                     {"Dplus", F.Dplus.matrix},
                                                     {"D", F.full.matrix},
                                                     {"tau_J", F.tau.J()},
                                                     {"t_roughness_weight", F.dbar.artifactWeight}};
                 }});
    return v;
}

}  // namespace z2::harness
