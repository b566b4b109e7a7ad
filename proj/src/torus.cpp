// Lattice dbar on the flux-n torus.
//
// X = (1/2)(grad_s + i grad_t) - (r h_s / 2) Lap_s with central covariant
// differences. The Wilson term acts along s only: it lifts the s-doubler, while
// the t-doubler survives as a zero mode of X^† (the partner that keeps the
// finite section's kernel even) and is marked by the t-roughness weight
// W_t = -(h_t^2/4) Lap_t, whose spectrum is [0,1].

#include "z2index/discretize.hpp"

#include <cmath>
#include <sstream>

namespace z2 {

double TorusLattice::ht() const { return 2.0 * M_PI / double(Lt); }
double TorusLattice::hs() const { return 2.0 * M_PI / double(Ls); }

TorusLattice make_flux_lattice(int Lt, int Ls, int n) {
    if (Lt < 2 || Ls < 2) throw InvalidParameter("lattice sizes must be >= 2");
    TorusLattice lat;
    lat.Lt = Lt;
    lat.Ls = Ls;
    lat.fluxN = n;
    lat.representation = LatticeRepresentation::Sites;
    lat.linkT = Mat(Lt, Ls);
    lat.linkS = Mat::Ones(Lt, Ls);
    const double ht = lat.ht(), hs = lat.hs();
    for (int j = 0; j < Lt; ++j) {
        for (int l = 0; l < Ls; ++l) lat.linkT(j, l) = std::polar(1.0, -double(n) * (l * hs) * ht / (2.0 * M_PI));
        lat.linkS(j, Ls - 1) = std::polar(1.0, double(n) * (j * ht));
    }
    return lat;
}

double lattice_flux(const TorusLattice& lat) {
    double total = 0.0;
    for (int j = 0; j < lat.Lt; ++j)
        for (int l = 0; l < lat.Ls; ++l) {
            const int j1 = (j + 1) % lat.Lt, l1 = (l + 1) % lat.Ls;
            const cplx p = lat.linkT(j, l) * lat.linkS(j1, l) * std::conj(lat.linkT(j, l1)) *
                           std::conj(lat.linkS(j, l));
            total += std::arg(p);
        }
    return total / (2.0 * M_PI);
}

namespace {

void audit(const TorusLattice& lat, int n) {
    if (lat.representation != LatticeRepresentation::Sites)
        throw InvalidParameter("flux torus needs the sites representation");
    if (lat.linkT.rows() != lat.Lt || lat.linkT.cols() != lat.Ls || lat.linkS.rows() != lat.Lt ||
        lat.linkS.cols() != lat.Ls)
        throw FluxMismatch("link phase arrays have the wrong shape");
    for (int j = 0; j < lat.Lt; ++j)
        for (int l = 0; l < lat.Ls; ++l)
            if (std::abs(std::abs(lat.linkT(j, l)) - 1.0) > 1e-12 || std::abs(std::abs(lat.linkS(j, l)) - 1.0) > 1e-12)
                throw FluxMismatch("link phases must have unit modulus");
    const double flux = lattice_flux(lat);
    if (std::abs(flux - double(n)) > 1e-9 || lat.fluxN != n) {
        std::ostringstream os;
        os << "links realize flux " << flux << ", expected " << n;
        throw FluxMismatch(os.str());
    }
}

}  // namespace

FluxTorus build_torus_flux(int n, const TorusLattice& lat, double r) {
    if (!(r >= 0.0)) throw InvalidParameter("Wilson parameter must be >= 0");
    audit(lat, n);
    const int Lt = lat.Lt, Ls = lat.Ls;
    const Index N = Index(Lt) * Ls;
    auto idx = [Lt, Ls](int j, int l) { return Index((j % Lt + Lt) % Lt) * Ls + ((l % Ls + Ls) % Ls); };
    const double ht = lat.ht(), hs = lat.hs();

    std::vector<Triplet> tt, ts;
    for (int j = 0; j < Lt; ++j)
        for (int l = 0; l < Ls; ++l) {
            tt.emplace_back(idx(j, l), idx(j + 1, l), lat.linkT(j, l));
            ts.emplace_back(idx(j, l), idx(j, l + 1), lat.linkS(j, l));
        }
    SpMat Tt(N, N), Ts(N, N);
    Tt.setFromTriplets(tt.begin(), tt.end());
    Ts.setFromTriplets(ts.begin(), ts.end());
    const SpMat Id = sparse_identity(N);
    SpMat TtH = Tt.adjoint(), TsH = Ts.adjoint();
    SpMat gradT = (Tt - TtH) * (0.5 / ht);
    SpMat gradS = (Ts - TsH) * (0.5 / hs);
    SpMat lapT = (Tt + TtH - 2.0 * Id) * (1.0 / (ht * ht));
    SpMat lapS = (Ts + TsH - 2.0 * Id) * (1.0 / (hs * hs));
    SpMat X = 0.5 * (gradS + I_unit * gradT) - (r * hs / 2.0) * lapS;
    X.prune(cplx(0.0), 0.0);
    SpMat Wt = (-(ht * ht) / 4.0) * lapT;
    Wt.prune(cplx(0.0), 0.0);

    std::vector<Triplet> rt;
    for (int j = 0; j < Lt; ++j)
        for (int l = 0; l < Ls; ++l) rt.emplace_back(idx(-j, l), idx(j, l), 1.0);
    SpMat R(N, N);
    R.setFromTriplets(rt.begin(), rt.end());

    FluxTorus out{n, r, lat, {}, {}, {}, make_standard_J(1), Grading(), FiberBundle(), R};
    out.dbar.name = "flux_dbar";
    out.dbar.matrix = X;
    out.dbar.modelClass = ModelClass::FiniteDifference;
    out.dbar.artifactWeight = Wt;

    // D+ on (L0+, L1+) -> (L0-, L1-)
    SpMat Xh = X.adjoint();
    std::vector<Triplet> dp;
    for (Index j = 0; j < X.outerSize(); ++j)
        for (SpMat::InnerIterator it(X, j); it; ++it) dp.emplace_back(N + it.row(), j, it.value());
    for (Index j = 0; j < Xh.outerSize(); ++j)
        for (SpMat::InnerIterator it(Xh, j); it; ++it) dp.emplace_back(it.row(), N + j, -it.value());
    out.Dplus.name = "flux_Dplus";
    out.Dplus.matrix.resize(2 * N, 2 * N);
    out.Dplus.matrix.setFromTriplets(dp.begin(), dp.end());
    out.Dplus.modelClass = ModelClass::FiniteDifference;
    out.Dplus.artifactWeight = kron(sparse_identity(2), Wt);

    SpMat DpH = out.Dplus.matrix.adjoint();
    std::vector<Triplet> full;
    for (Index j = 0; j < out.Dplus.matrix.outerSize(); ++j)
        for (SpMat::InnerIterator it(out.Dplus.matrix, j); it; ++it) full.emplace_back(2 * N + it.row(), j, it.value());
    for (Index j = 0; j < DpH.outerSize(); ++j)
        for (SpMat::InnerIterator it(DpH, j); it; ++it) full.emplace_back(it.row(), 2 * N + j, it.value());
    out.full.name = "flux_D";
    out.full.matrix.resize(4 * N, 4 * N);
    out.full.matrix.setFromTriplets(full.begin(), full.end());
    out.full.modelClass = ModelClass::FiniteDifference;
    out.full.artifactWeight = kron(sparse_identity(4), Wt);

    // theta^E pairs L0+ with L0- and L1+ with L1-, composed with theta^L = conj o R.
    Mat pair = Mat::Zero(4, 4);
    pair(0, 2) = 1.0;
    pair(1, 3) = 1.0;
    pair(2, 0) = -1.0;
    pair(3, 1) = -1.0;
    out.tau = AntiUnitary(kron(to_sparse(pair), R));
    out.grading = Grading::fromDims(2 * N, 2 * N);
    out.bundle.fiberDim = 4;
    out.bundle.grading = Grading(std::vector<int>{1, 1, -1, -1});
    out.bundle.thetaFiber = pair;
    out.bundle.thetaSquare = -1;
    return out;
}

}  // namespace z2
