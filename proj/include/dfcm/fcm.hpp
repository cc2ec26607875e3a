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

// Fuzzy c-means by alternating optimization, seeded from the best of several
// k-means++/Lloyd runs. Data matrices hold one point per row.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dfcm/common.hpp"

namespace dfcm {

struct FcmConfig {
  Index clusters = 2;
  double fuzzifier = 1.1;
  int max_iter = 1000;
  double eps = 0.005;
  std::uint64_t seed = 0;
  int init_runs = 10;

  void validate() const {
    if (clusters < 1) throw Error(ErrorCode::InvalidConfig, "clusters must be >= 1");
    if (!(fuzzifier > 1.0)) {
      throw Error(ErrorCode::InvalidFuzzifier, "fuzzifier must be > 1, got " +
                                                    std::to_string(fuzzifier));
    }
    if (max_iter < 1) throw Error(ErrorCode::InvalidConfig, "max_iter must be >= 1");
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidConfig, "eps must be > 0");
    if (init_runs < 1) throw Error(ErrorCode::InvalidConfig, "init_runs must be >= 1");
  }
};

template <typename Scalar>
struct FcmResult {
  Matrix<Scalar> memberships;  // c x n, column-stochastic
  Matrix<Scalar> centroids;    // c x d
  std::vector<Scalar> objective_trace;
  int iterations = 0;
  bool converged = false;
};

/// Distance below which a point is treated as sitting on a centroid.
inline constexpr double kCoincidentDistance = 1e-12;

/// Squared Euclidean distances, c x n.
template <typename DerivedX, typename DerivedQ>
Matrix<typename DerivedX::Scalar> squared_distances(const Eigen::MatrixBase<DerivedX>& X,
                                                    const Eigen::MatrixBase<DerivedQ>& Q) {
  using Scalar = typename DerivedX::Scalar;
  if (X.cols() != Q.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "data has " + std::to_string(X.cols()) +
                                                  " columns, centroids " +
                                                  std::to_string(Q.cols()));
  }
  Matrix<Scalar> d2(Q.rows(), X.rows());
  for (Index k = 0; k < X.rows(); ++k) {
    for (Index i = 0; i < Q.rows(); ++i) d2(i, k) = (X.row(k) - Q.row(i)).squaredNorm();
  }
  return d2;
}

/// Membership update with the centroids held fixed:
///   m_ik = 1 / sum_j (|a_k - q_i| / |a_k - q_j|)^(2/(f-1))
/// Points coinciding with one or more centroids split their membership evenly
/// over those centroids.
template <typename DerivedX, typename DerivedQ>
Matrix<typename DerivedX::Scalar> update_memberships(const Eigen::MatrixBase<DerivedX>& X,
                                                     const Eigen::MatrixBase<DerivedQ>& Q,
                                                     double fuzzifier) {
  using Scalar = typename DerivedX::Scalar;
  if (!(fuzzifier > 1.0)) {
    throw Error(ErrorCode::InvalidFuzzifier, "fuzzifier must be > 1");
  }
  const Matrix<Scalar> d2 = squared_distances(X, Q);
  const Index c = Q.rows();
  // Exponent on squared distances: (d^2)^(1/(f-1)) = d^(2/(f-1)).
  const Scalar power = Scalar(1) / Scalar(fuzzifier - 1.0);
  const Scalar coincident = Scalar(kCoincidentDistance * kCoincidentDistance);

  Matrix<Scalar> M(c, X.rows());
  for (Index k = 0; k < X.rows(); ++k) {
    Index hits = 0;
    for (Index i = 0; i < c; ++i) hits += d2(i, k) < coincident ? 1 : 0;
    if (hits > 0) {
      for (Index i = 0; i < c; ++i) {
        M(i, k) = d2(i, k) < coincident ? Scalar(1) / Scalar(hits) : Scalar(0);
      }
      continue;
    }
    // Ratios against the nearest centroid stay in (0, 1], so the powers
    // underflow gracefully instead of overflowing when f is close to 1.
    const Scalar nearest = d2.col(k).minCoeff();
    Scalar total(0);
    for (Index i = 0; i < c; ++i) {
      M(i, k) = std::pow(nearest / d2(i, k), power);
      total += M(i, k);
    }
    M.col(k) /= total;
  }
  return M;
}

/// Centroid update with the memberships held fixed:
///   q_i = sum_k m_ik^f a_k / sum_k m_ik^f
template <typename DerivedX, typename DerivedM>
Matrix<typename DerivedX::Scalar> update_centroids(const Eigen::MatrixBase<DerivedX>& X,
                                                   const Eigen::MatrixBase<DerivedM>& M,
                                                   double fuzzifier) {
  using Scalar = typename DerivedX::Scalar;
  if (M.cols() != X.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "membership columns do not match data rows");
  }
  const Matrix<Scalar> weights = M.array().pow(Scalar(fuzzifier)).matrix();
  Matrix<Scalar> Q = weights * X;
  for (Index i = 0; i < Q.rows(); ++i) {
    const Scalar total = weights.row(i).sum();
    if (!(total > Scalar(0))) {
      throw Error(ErrorCode::EmptyCluster,
                  "cluster " + std::to_string(i) + " has zero total membership weight");
    }
    Q.row(i) /= total;
  }
  return Q;
}

/// J = sum_i sum_k m_ik^f |a_k - q_i|^2
template <typename DerivedX, typename DerivedM, typename DerivedQ>
typename DerivedX::Scalar fcm_objective(const Eigen::MatrixBase<DerivedX>& X,
                                        const Eigen::MatrixBase<DerivedM>& M,
                                        const Eigen::MatrixBase<DerivedQ>& Q, double fuzzifier) {
  using Scalar = typename DerivedX::Scalar;
  const Matrix<Scalar> d2 = squared_distances(X, Q);
  return (M.array().pow(Scalar(fuzzifier)) * d2.array()).sum();
}

// --- k-means initialization ---------------------------------------------------

template <typename Scalar>
struct KMeansRun {
  Matrix<Scalar> centroids;
  std::vector<Index> labels;
  Scalar sse = std::numeric_limits<Scalar>::infinity();
};

namespace detail {

template <typename Scalar>
Index nearest_centroid(const Matrix<Scalar>& d2, Index k) {
  Index best = 0;
  for (Index i = 1; i < d2.rows(); ++i) {
    if (d2(i, k) < d2(best, k)) best = i;  // strict: ties keep the lowest index
  }
  return best;
}

template <typename Scalar, typename Derived>
Matrix<Scalar> kmeanspp_seed(const Eigen::MatrixBase<Derived>& X, Index c, std::mt19937_64& rng) {
  const Index n = X.rows();
  Matrix<Scalar> Q(c, X.cols());
  std::uniform_int_distribution<Index> pick(0, n - 1);
  Q.row(0) = X.row(pick(rng));
  Vector<Scalar> closest(n);
  for (Index k = 0; k < n; ++k) closest(k) = (X.row(k) - Q.row(0)).squaredNorm();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Index i = 1; i < c; ++i) {
    const double total = static_cast<double>(closest.sum());
    Index chosen = n - 1;
    if (total > 0.0) {
      double target = unit(rng) * total;
      for (Index k = 0; k < n; ++k) {
        target -= static_cast<double>(closest(k));
        if (target < 0.0) {
          chosen = k;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    Q.row(i) = X.row(chosen);
    for (Index k = 0; k < n; ++k) {
      closest(k) = std::min(closest(k), (X.row(k) - Q.row(i)).squaredNorm());
    }
  }
  return Q;
}

template <typename Scalar, typename Derived>
KMeansRun<Scalar> lloyd(const Eigen::MatrixBase<Derived>& X, Matrix<Scalar> Q, int max_iter) {
  const Index n = X.rows();
  const Index c = Q.rows();
  std::vector<Index> labels(static_cast<std::size_t>(n), -1);
  for (int it = 0; it < max_iter; ++it) {
    const Matrix<Scalar> d2 = squared_distances(X, Q);
    bool changed = false;
    for (Index k = 0; k < n; ++k) {
      Index l = nearest_centroid(d2, k);
      if (l != labels[k]) {
        labels[k] = l;
        changed = true;
      }
    }
    if (!changed && it > 0) break;

    Matrix<Scalar> sums = Matrix<Scalar>::Zero(c, X.cols());
    std::vector<Index> counts(static_cast<std::size_t>(c), 0);
    for (Index k = 0; k < n; ++k) {
      sums.row(labels[k]) += X.row(k);
      ++counts[labels[k]];
    }
    for (Index i = 0; i < c; ++i) {
      if (counts[i] > 0) {
        Q.row(i) = sums.row(i) / Scalar(counts[i]);
        continue;
      }
      // Empty cluster: move it to the point farthest from its nearest centroid.
      Index far = 0;
      Scalar far_d = Scalar(-1);
      for (Index k = 0; k < n; ++k) {
        Scalar dk = d2(nearest_centroid(d2, k), k);
        if (dk > far_d) {
          far_d = dk;
          far = k;
        }
      }
      Q.row(i) = X.row(far);
    }
  }

  KMeansRun<Scalar> run;
  const Matrix<Scalar> d2 = squared_distances(X, Q);
  run.sse = Scalar(0);
  run.labels.resize(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    run.labels[k] = nearest_centroid(d2, k);
    run.sse += d2(run.labels[k], k);
  }
  run.centroids = std::move(Q);
  return run;
}

}  // namespace detail

inline constexpr int kLloydMaxIter = 300;

/// Best (lowest within-cluster SSE) of `runs` k-means++ seeded Lloyd runs.
template <typename Derived>
KMeansRun<typename Derived::Scalar> kmeans_best_of(const Eigen::MatrixBase<Derived>& X, Index c,
                                                   int runs, std::uint64_t seed) {
  using Scalar = typename Derived::Scalar;
  if (c < 1) throw Error(ErrorCode::InvalidConfig, "k-means needs at least one cluster");
  if (runs < 1) throw Error(ErrorCode::InvalidConfig, "k-means needs at least one run");
  if (X.rows() < c) {
    throw Error(ErrorCode::TooFewPoints, std::to_string(X.rows()) + " points for " +
                                             std::to_string(c) + " clusters");
  }
  std::mt19937_64 rng(seed);
  KMeansRun<Scalar> best;
  for (int r = 0; r < runs; ++r) {
    auto run = detail::lloyd<Scalar>(X, detail::kmeanspp_seed<Scalar>(X, c, rng), kLloydMaxIter);
    if (run.sse < best.sse) best = std::move(run);
  }
  return best;
}

template <typename Derived>
Matrix<typename Derived::Scalar> kmeans_init(const Eigen::MatrixBase<Derived>& X, Index c,
                                             int runs, std::uint64_t seed) {
  return kmeans_best_of(X, c, runs, seed).centroids;
}

// --- FCM driver -------------------------------------------------------------------

/// Alternates membership and centroid updates until |M_t - M_{t-1}|_F < eps
/// or max_iter iterations have run. The first iteration has no predecessor and
/// is never declared converged.
template <typename Derived>
FcmResult<typename Derived::Scalar> fcm_fit(
    const Eigen::MatrixBase<Derived>& X, const FcmConfig& config,
    const std::optional<Matrix<typename Derived::Scalar>>& init = std::nullopt) {
  using Scalar = typename Derived::Scalar;
  config.validate();
  if (X.rows() < config.clusters) {
    throw Error(ErrorCode::TooFewPoints, std::to_string(X.rows()) + " points for " +
                                             std::to_string(config.clusters) + " clusters");
  }
  if (!X.allFinite()) throw Error(ErrorCode::NonFiniteInput, "data contains NaN or Inf");

  FcmResult<Scalar> result;
  if (init) {
    if (init->rows() != config.clusters || init->cols() != X.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "initial centroids have the wrong shape");
    }
    result.centroids = *init;
  } else {
    result.centroids = kmeans_init(X, config.clusters, config.init_runs, config.seed);
  }

  Matrix<Scalar> previous;
  for (int t = 1; t <= config.max_iter; ++t) {
    result.memberships = update_memberships(X, result.centroids, config.fuzzifier);
    result.centroids = update_centroids(X, result.memberships, config.fuzzifier);
    result.objective_trace.push_back(
        fcm_objective(X, result.memberships, result.centroids, config.fuzzifier));
    result.iterations = t;
    if (t > 1 && (result.memberships - previous).norm() < Scalar(config.eps)) {
      result.converged = true;
      break;
    }
    previous = result.memberships;
  }
  return result;
}

}  // namespace dfcm
