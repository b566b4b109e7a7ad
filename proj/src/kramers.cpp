#include "z2index/quaternionic.hpp"
#include "z2index/spectra.hpp"

#include <cmath>
#include <sstream>

namespace z2 {

KramersCertificate kramers_multiplicity_check(const Mat& A, const AntiUnitary& tau, KramersMode mode,
                                              double relTol, double symmetryTol) {
    if (A.rows() != A.cols() || A.rows() != tau.dim())
        throw DimensionMismatch("kramers_multiplicity_check: size");
    KramersCertificate cert;
    Mat H;
    if (mode == KramersMode::Commuting) {
        // tau H tau^{-1} = J conj(H) J^†
        Mat J = tau.denseJ();
        const double herm = (A - A.adjoint()).norm() / std::max(1.0, A.norm());
        const double comm = (J * A.conjugate() * J.adjoint() - A).norm() / std::max(1.0, A.norm());
        cert.symmetryResidual = std::max(herm, comm);
        H = A;
    } else {
        // A is the odd symmetric D; the multiplicities are those of D^† D.
        cert.symmetryResidual = check_odd_symmetric(A, tau);
        H = A.adjoint() * A;
    }
    if (cert.symmetryResidual > symmetryTol) {
        std::ostringstream os;
        os << "precondition identity fails, residual " << cert.symmetryResidual;
        throw SymmetryViolation(os.str());
    }
    RVec ev = hermitian_eigenvalues(H);
    double radius = 0.0;
    for (Index i = 0; i < ev.size(); ++i) radius = std::max(radius, std::abs(ev(i)));
    const double tol = radius > 0.0 ? relTol * radius : 0.0;
    for (Index i = 0; i < ev.size();) {
        Index j = i + 1;
        while (j < ev.size() && ev(j) - ev(j - 1) <= tol) ++j;
        KramersCluster c;
        double sum = 0.0;
        for (Index a = i; a < j; ++a) sum += ev(a);
        c.value = sum / double(j - i);
        c.multiplicity = static_cast<int>(j - i);
        const bool exempt = mode == KramersMode::SquaredOffDiagonal && std::abs(ev(i)) <= tol;
        if (!exempt && c.multiplicity % 2 != 0) cert.allEven = false;
        cert.clusters.push_back(c);
        i = j;
    }
    return cert;
}

std::vector<int> homotopy_parity_sweep(const std::vector<DiscreteOperator>& path, const AntiUnitary& tau,
                                       const KernelPolicy& policy, double stepBound,
                                       std::vector<SweepStep>* steps) {
    std::vector<int> out;
    for (size_t s = 0; s < path.size(); ++s) {
        const double res = check_odd_symmetric(path[s].matrix, tau);
        if (res > 1e-10) {
            std::ostringstream os;
            os << "step " << s << " is not odd symmetric, residual " << res;
            throw SymmetryViolation(os.str());
        }
        if (s > 0) {
            const double d = frobenius(SpMat(path[s].matrix - path[s - 1].matrix));
            if (d > stepBound) {
                std::ostringstream os;
                os << "step " << s << " moves by " << d << " > bound " << stepBound;
                throw SymmetryViolation(os.str());
            }
        }
        try {
            SpectralReport rep = analyze_kernel(path[s], policy).report;
            out.push_back(z2_index(rep));
            if (steps) steps->push_back({out.back(), rep});
        } catch (const AmbiguousKernel& e) {
            throw AmbiguousKernel("step " + std::to_string(s) + ": " + e.what());
        }
    }
    return out;
}

std::vector<int> homotopy_parity_sweep(const std::vector<Mat>& path, const AntiUnitary& tau,
                                       const KernelPolicy& policy, double stepBound) {
    std::vector<DiscreteOperator> ops;
    for (size_t s = 0; s < path.size(); ++s) {
        DiscreteOperator op;
        op.name = "step" + std::to_string(s);
        op.matrix = to_sparse(path[s]);
        ops.push_back(std::move(op));
    }
    return homotopy_parity_sweep(ops, tau, policy, stepBound);
}

}  // namespace z2
