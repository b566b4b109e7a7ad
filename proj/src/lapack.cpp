#include "lapack.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>

namespace z2::lapack {

namespace {

void check(lapack_int info, const char* what) {
    if (info != 0) throw NumericalFailure(std::string(what) + " failed, info = " + std::to_string(info));
}

std::vector<double> ascending(const double* s, Index n) {
    std::vector<double> v(s, s + n);
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

bool is_real(const Mat& a) {
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            if (a(i, j).imag() != 0.0) return false;
    return true;
}

std::vector<double> svd_values(const RMat& a) {
    const Index m = a.rows(), n = a.cols(), k = std::min(m, n);
    if (k == 0) return {};
    RMat work = a;
    std::vector<double> s(static_cast<size_t>(k));
    check(LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', lapack_int(m), lapack_int(n), work.data(),
                         lapack_int(m), s.data(), nullptr, 1, nullptr, 1),
          "dgesdd");
    return ascending(s.data(), k);
}

std::vector<double> svd_values(const Mat& a) {
    if (is_real(a)) return svd_values(RMat(a.real()));
    const Index m = a.rows(), n = a.cols(), k = std::min(m, n);
    if (k == 0) return {};
    Mat work = a;
    std::vector<double> s(static_cast<size_t>(k));
    check(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', lapack_int(m), lapack_int(n), work.data(),
                         lapack_int(m), s.data(), nullptr, 1, nullptr, 1),
          "zgesdd");
    return ascending(s.data(), k);
}

void svd_full(const Mat& a, std::vector<double>& values, Mat& V) {
    const Index m = a.rows(), n = a.cols(), k = std::min(m, n);
    values.assign(static_cast<size_t>(n), 0.0);
    V = Mat::Identity(n, n);
    if (k == 0) return;
    std::vector<double> s(static_cast<size_t>(k));
    Mat Vt(n, n);
    if (is_real(a)) {
        RMat work = a.real();
        RMat U(m, m), VtR(n, n);
        check(LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'A', lapack_int(m), lapack_int(n), work.data(),
                             lapack_int(m), s.data(), U.data(), lapack_int(m), VtR.data(),
                             lapack_int(n)),
              "dgesdd");
        Vt = VtR.cast<cplx>();
    } else {
        Mat work = a;
        Mat U(m, m);
        check(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', lapack_int(m), lapack_int(n), work.data(),
                             lapack_int(m), s.data(), U.data(), lapack_int(m), Vt.data(),
                             lapack_int(n)),
              "zgesdd");
    }
    // LAPACK order is descending; rows k..n-1 of V^† span the extra null space.
    Mat Vfull = Vt.adjoint();
    std::vector<Index> order;
    for (Index i = n - 1; i >= k; --i) order.push_back(i);
    for (Index i = k - 1; i >= 0; --i) order.push_back(i);
    for (Index c = 0; c < n; ++c) {
        const Index src = order[static_cast<size_t>(c)];
        V.col(c) = Vfull.col(src);
        values[static_cast<size_t>(c)] = src < k ? s[static_cast<size_t>(src)] : 0.0;
    }
}

RVec heev_values(const Mat& h) {
    const Index n = h.rows();
    RVec w(n);
    if (n == 0) return w;
    Mat work = h;
    check(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', lapack_int(n), work.data(), lapack_int(n),
                         w.data()),
          "zheevd");
    return w;
}

void heev(const Mat& h, RVec& values, Mat& vectors) {
    const Index n = h.rows();
    values.resize(n);
    vectors = h;
    if (n == 0) return;
    check(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', lapack_int(n), vectors.data(), lapack_int(n),
                         values.data()),
          "zheevd");
}

RVec hbev_values(const Mat& ab, Index kd) {
    const Index n = ab.cols();
    RVec w(n);
    Mat work = ab;
    check(LAPACKE_zhbevd(LAPACK_COL_MAJOR, 'N', 'U', lapack_int(n), lapack_int(kd), work.data(),
                         lapack_int(ab.rows()), w.data(), nullptr, 1),
          "zhbevd");
    return w;
}

RVec sbev_values(const RMat& ab, Index kd) {
    const Index n = ab.cols();
    RVec w(n);
    RMat work = ab;
    check(LAPACKE_dsbevd(LAPACK_COL_MAJOR, 'N', 'U', lapack_int(n), lapack_int(kd), work.data(),
                         lapack_int(ab.rows()), w.data(), nullptr, 1),
          "dsbevd");
    return w;
}

}  // namespace z2::lapack
