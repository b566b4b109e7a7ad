#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace z2 {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::ColMajor, long>;
using Triplet = Eigen::Triplet<cplx, long>;
using Index = long;

inline constexpr cplx I_unit{0.0, 1.0};

// Every failure mode the library reports. `kind` is the stable identifier
// used in reports and by the harness to map errors onto verdicts.
class Z2Error : public std::runtime_error {
public:
    Z2Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define Z2_DEFINE_ERROR(Name)                                                  \
    class Name : public Z2Error {                                              \
    public:                                                                    \
        explicit Name(const std::string& what) : Z2Error(#Name, what) {}       \
    };

Z2_DEFINE_ERROR(DimensionMismatch)
Z2_DEFINE_ERROR(AmbiguousKernel)
Z2_DEFINE_ERROR(SymmetryViolation)
Z2_DEFINE_ERROR(Unstable)
Z2_DEFINE_ERROR(NotAdmissible)
Z2_DEFINE_ERROR(SingularPotential)
Z2_DEFINE_ERROR(MismatchAtCut)
Z2_DEFINE_ERROR(NoGap)
Z2_DEFINE_ERROR(NotInvertibleAtInfinity)
Z2_DEFINE_ERROR(FluxMismatch)
Z2_DEFINE_ERROR(CliffordViolation)
Z2_DEFINE_ERROR(UnknownExperiment)
Z2_DEFINE_ERROR(InvalidParameter)
Z2_DEFINE_ERROR(NumericalFailure)

#undef Z2_DEFINE_ERROR

SpMat to_sparse(const Mat& m, double dropTol = 0.0);
Mat to_dense(const SpMat& m);
SpMat sparse_identity(Index n);
SpMat kron(const SpMat& a, const SpMat& b);
SpMat conj(const SpMat& a);
double frobenius(const SpMat& a);

}  // namespace z2
