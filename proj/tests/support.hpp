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

// Test fixtures and independent oracles. Nothing here calls into the library
// code it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dfcm/textprep.hpp"

namespace dfcm::testing {

// --- 3-blob dataset ------------------------------------------------------------------

struct Blobs {
  Eigen::MatrixXd points;  // 60 x 2
  std::vector<int> labels;
  Eigen::MatrixXd centers;  // 3 x 2
};

inline Blobs three_blobs(std::uint64_t seed = 7, double sigma = 0.1, int per_blob = 20) {
  Blobs b;
  b.centers.resize(3, 2);
  b.centers << 0, 0, 5, 0, 0, 5;
  b.points.resize(3 * per_blob, 2);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (int c = 0; c < 3; ++c) {
    for (int k = 0; k < per_blob; ++k) {
      const int row = c * per_blob + k;
      b.points(row, 0) = b.centers(c, 0) + noise(rng);
      b.points(row, 1) = b.centers(c, 1) + noise(rng);
      b.labels.push_back(c);
    }
  }
  return b;
}

/// Plain Lloyd's with Forgy initialization (random distinct points), best of
/// `runs` by SSE. Returns hard labels.
inline std::vector<int> oracle_kmeans_labels(const Eigen::MatrixXd& X, int c, int runs,
                                             std::uint64_t seed) {
  const int n = static_cast<int>(X.rows());
  std::mt19937 rng(static_cast<std::uint32_t>(seed));
  std::vector<int> best;
  double best_sse = INFINITY;
  for (int r = 0; r < runs; ++r) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    Eigen::MatrixXd centers(c, X.cols());
    for (int i = 0; i < c; ++i) centers.row(i) = X.row(idx[i]);
    std::vector<int> labels(n, 0);
    for (int it = 0; it < 100; ++it) {
      for (int k = 0; k < n; ++k) {
        double bd = INFINITY;
        for (int i = 0; i < c; ++i) {
          double d = (X.row(k) - centers.row(i)).squaredNorm();
          if (d < bd) {
            bd = d;
            labels[k] = i;
          }
        }
      }
      Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(c, X.cols());
      std::vector<int> counts(c, 0);
      for (int k = 0; k < n; ++k) {
        sums.row(labels[k]) += X.row(k);
        counts[labels[k]]++;
      }
      for (int i = 0; i < c; ++i) {
        if (counts[i]) centers.row(i) = sums.row(i) / counts[i];
      }
    }
    double sse = 0;
    for (int k = 0; k < n; ++k) sse += (X.row(k) - centers.row(labels[k])).squaredNorm();
    if (sse < best_sse) {
      best_sse = sse;
      best = labels;
    }
  }
  return best;
}

/// Fraction of points on which two labelings agree under the best relabeling
/// (exhaustive over permutations).
inline double agreement_up_to_relabeling(const std::vector<int>& a, const std::vector<int>& b,
                                         int c) {
  std::vector<int> perm(c);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t k = 0; k < a.size(); ++k) hits += perm[a[k]] == b[k];
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(a.size());
}

inline std::vector<int> argmax_labels(const Eigen::MatrixXd& memberships) {
  std::vector<int> labels(memberships.cols());
  for (Eigen::Index k = 0; k < memberships.cols(); ++k) {
    Eigen::Index arg;
    memberships.col(k).maxCoeff(&arg);
    labels[k] = static_cast<int>(arg);
  }
  return labels;
}

// --- collapse oracle -------------------------------------------------------------------

/// Character scan: keep a letter unless the two previously kept chars equal it.
inline std::string oracle_collapse(const std::string& s) {
  std::string out;
  int run = 0;
  char prev = 0;
  for (char ch : s) {
    run = (ch == prev) ? run + 1 : 1;
    prev = ch;
    bool letter = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z');
    if (letter && run > 2) continue;
    out.push_back(ch);
  }
  return out;
}

// --- dense SVD oracle -------------------------------------------------------------------

/// One-sided Jacobi (Hestenes) singular values, descending.
inline Eigen::VectorXd oracle_singular_values(Eigen::MatrixXd A) {
  if (A.rows() < A.cols()) A.transposeInPlace();
  const Eigen::Index n = A.cols();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double alpha = A.col(p).squaredNorm();
        const double beta = A.col(q).squaredNorm();
        const double gamma = A.col(p).dot(A.col(q));
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        off = std::max(off, std::abs(gamma) / std::sqrt(alpha * beta));
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        const Eigen::VectorXd ap = A.col(p);
        A.col(p) = cs * ap - sn * A.col(q);
        A.col(q) = sn * ap + cs * A.col(q);
      }
    }
    if (off < 1e-15) break;
  }
  Eigen::VectorXd s(n);
  for (Eigen::Index j = 0; j < n; ++j) s(j) = A.col(j).norm();
  std::sort(s.data(), s.data() + n, std::greater<>());
  return s;
}

// --- planted-topic corpus ------------------------------------------------------------------

inline const std::vector<std::string>& planted_prefixes() {
  static const std::vector<std::string> p = {"energy", "market", "legal"};
  return p;
}

inline std::string planted_term(int set, int j) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02d", planted_prefixes()[set].c_str(), j);
  return buf;
}

inline int planted_set_of(const std::string& term) {
  for (int s = 0; s < 3; ++s) {
    if (term.rfind(planted_prefixes()[s], 0) == 0) return s;
  }
  return -1;
}

struct PlantedCorpus {
  std::vector<TokenList> docs;
  std::vector<int> labels;
};

/// `n_docs` documents, each 15 tokens drawn from one of 3 disjoint 20-term sets.
inline PlantedCorpus planted_corpus(std::uint64_t seed, int n_docs = 300, int tokens = 15) {
  PlantedCorpus pc;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> word(0, 19);
  for (int d = 0; d < n_docs; ++d) {
    const int set = d % 3;
    TokenList doc;
    for (int t = 0; t < tokens; ++t) doc.push_back(planted_term(set, word(rng)));
    pc.docs.push_back(std::move(doc));
    pc.labels.push_back(set);
  }
  return pc;
}

/// Embeddings where every term of set s is e_s plus small noise: within-set
/// cosine close to 1, cross-set close to 0.
inline std::string planted_embeddings_text(std::uint64_t seed = 11, double noise = 0.01) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, noise);
  std::string out = "60 3\n";
  char buf[64];
  for (int s = 0; s < 3; ++s) {
    for (int j = 0; j < 20; ++j) {
      out += planted_term(s, j);
      for (int k = 0; k < 3; ++k) {
        std::snprintf(buf, sizeof buf, " %.6f", (k == s ? 1.0 : 0.0) + n(rng));
        out += buf;
      }
      out += '\n';
    }
  }
  return out;
}

/// Bijection check: at least `purity` of every topic's top_n words come from a
/// distinct planted set. Returns false if two topics map to the same set.
inline bool planted_recovered(const std::vector<std::vector<std::string>>& topics, double purity,
                              std::size_t top_n = 10) {
  std::set<int> used;
  for (const auto& words : topics) {
    if (words.empty()) return false;
    std::map<int, int> counts;
    for (const auto& w : words) counts[planted_set_of(w)]++;
    auto best = std::max_element(counts.begin(), counts.end(),
                                 [](auto& a, auto& b) { return a.second < b.second; });
    if (best->first < 0) return false;
    if (static_cast<double>(best->second) < purity * static_cast<double>(top_n)) return false;
    if (!used.insert(best->first).second) return false;
  }
  return true;
}

}  // namespace dfcm::testing
