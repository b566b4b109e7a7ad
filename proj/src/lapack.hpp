#pragma once

// Thin LAPACK layer. Everything returns ascending values.

#include "z2index/common.hpp"

namespace z2::lapack {

bool is_real(const Mat& a);

std::vector<double> svd_values(const Mat& a);
std::vector<double> svd_values(const RMat& a);

// Full SVD; values ascending with the matching right singular vectors as the
// columns of V (n x n, including the null directions of wide matrices).
void svd_full(const Mat& a, std::vector<double>& values, Mat& V);

RVec heev_values(const Mat& h);
void heev(const Mat& h, RVec& values, Mat& vectors);

// Hermitian band matrix in LAPACK upper band storage: ab(kd + i - j, j) = H(i, j)
// for max(0, j - kd) <= i <= j.
RVec hbev_values(const Mat& ab, Index kd);
RVec sbev_values(const RMat& ab, Index kd);

}  // namespace z2::lapack
