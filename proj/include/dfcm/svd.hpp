// Copyright 2026 The DFCM Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Truncated SVD of a documents x terms matrix for the eigenspace projection
// X~ = D V_p and its back-projection C V_p^T.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "dfcm/common.hpp"

namespace dfcm {

enum class SvdMethod { Automatic, Randomized, Dense };

inline constexpr Index kSvdOversampling = 10;
inline constexpr int kSvdPowerIterations = 7;
/// Automatic uses the dense path when both dimensions are below this.
inline constexpr Index kDenseSvdLimit = 500;

template <typename Scalar>
struct TruncatedSvd {
  Matrix<Scalar> right_vectors;  // n_terms x p, orthonormal columns
  Vector<Scalar> singular_values;  // nonincreasing

  Index rank() const { return right_vectors.cols(); }
  Index n_terms() const { return right_vectors.rows(); }
};

namespace detail {

template <typename Scalar>
Matrix<Scalar> orthonormal_basis(const Matrix<Scalar>& Y) {
  Eigen::HouseholderQR<Matrix<Scalar>> qr(Y);
  return qr.householderQ() * Matrix<Scalar>::Identity(Y.rows(), Y.cols());
}

/// Flip each column so its largest-magnitude entry (first on ties) is >= 0.
template <typename Scalar>
void fix_signs(Matrix<Scalar>& V) {
  for (Index j = 0; j < V.cols(); ++j) {
    Index arg = 0;
    for (Index i = 1; i < V.rows(); ++i) {
      if (std::abs(V(i, j)) > std::abs(V(arg, j))) arg = i;
    }
    if (V(arg, j) < Scalar(0)) V.col(j) = -V.col(j);
  }
}

}  // namespace detail

/// Top-p right singular vectors and singular values of D. The randomized path
/// uses block power iteration with oversampling; the dense path a full
/// divide-and-conquer SVD.
template <typename Input>
TruncatedSvd<typename Input::Scalar> truncated_svd(const Input& D, Index p, std::uint64_t seed,
                                                   SvdMethod method = SvdMethod::Automatic) {
  using Scalar = typename Input::Scalar;
  const Index min_dim = std::min(D.rows(), D.cols());
  if (p < 1 || p > min_dim) {
    throw Error(ErrorCode::RankTooLarge, "rank " + std::to_string(p) + " outside [1, " +
                                             std::to_string(min_dim) + "]");
  }
  if (method == SvdMethod::Automatic) {
    method = (D.rows() < kDenseSvdLimit && D.cols() < kDenseSvdLimit) ? SvdMethod::Dense
                                                                     : SvdMethod::Randomized;
  }

  TruncatedSvd<Scalar> out;
  if (method == SvdMethod::Dense) {
    const Matrix<Scalar> dense = D;
    Eigen::BDCSVD<Matrix<Scalar>> svd(dense, Eigen::ComputeThinV);
    out.right_vectors = svd.matrixV().leftCols(p);
    out.singular_values = svd.singularValues().head(p);
  } else {
    const Index width = std::min(p + kSvdOversampling, min_dim);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix<Scalar> omega(D.cols(), width);
    for (Index c = 0; c < width; ++c) {
      for (Index r = 0; r < D.cols(); ++r) omega(r, c) = Scalar(normal(rng));
    }
    Matrix<Scalar> Q = detail::orthonormal_basis<Scalar>(D * omega);
    for (int it = 0; it < kSvdPowerIterations; ++it) {
      const Matrix<Scalar> Z = detail::orthonormal_basis<Scalar>(D.transpose() * Q);
      Q = detail::orthonormal_basis<Scalar>(D * Z);
    }
    const Matrix<Scalar> Bt = D.transpose() * Q;  // n_terms x width, = B^T
    Eigen::JacobiSVD<Matrix<Scalar>> svd(Bt, Eigen::ComputeThinU);
    out.right_vectors = svd.matrixU().leftCols(p);
    out.singular_values = svd.singularValues().head(p);
  }
  detail::fix_signs(out.right_vectors);
  return out;
}

/// Document coordinates in the eigenspace, n x p.
template <typename Input, typename Scalar>
Matrix<Scalar> project(const Input& D, const TruncatedSvd<Scalar>& svd) {
  if (D.cols() != svd.n_terms()) {
    throw Error(ErrorCode::DimensionMismatch, "project: matrix has " + std::to_string(D.cols()) +
                                                  " columns, basis " +
                                                  std::to_string(svd.n_terms()));
  }
  return D * svd.right_vectors;
}

/// c x p eigenspace points mapped back to term space, c x n_terms.
template <typename Derived, typename Scalar>
Matrix<Scalar> back_project(const Eigen::MatrixBase<Derived>& C, const TruncatedSvd<Scalar>& svd) {
  if (C.cols() != svd.rank()) {
    throw Error(ErrorCode::DimensionMismatch, "back_project: expected " +
                                                  std::to_string(svd.rank()) + " columns");
  }
  return C * svd.right_vectors.transpose();
}

}  // namespace dfcm
