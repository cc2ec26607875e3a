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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <unistd.h>

#include "dfcm/commands.hpp"
#include "support.hpp"

using namespace dfcm;
using Eigen::MatrixXd;
using Eigen::VectorXd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds,
               const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    out.require(false, "runtime " + std::to_string(secs) + " s exceeds limit");
  }
  if (!out.ok) ++failures;
  std::printf("%s [%2d] %s (%.3f s)%s%s\n", out.ok ? "PASS" : "FAIL", id, name.c_str(), secs,
              out.ok ? "" : ": ", out.detail.c_str());
  std::fflush(stdout);
}

MatrixXd uniform_rows(Index n, Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MatrixXd X(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) X(i, j) = u(rng);
  }
  return X;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> word_lists(const TopicSet& set) {
  std::vector<std::vector<std::string>> out;
  for (const auto& t : set.topics) {
    auto& words = out.emplace_back();
    for (const auto& w : t.words) words.push_back(w.term);
  }
  return out;
}

FcmConfig blob_config(double f) {
  FcmConfig cfg;
  cfg.clusters = 3;
  cfg.fuzzifier = f;
  cfg.eps = 1e-6;
  cfg.seed = 42;
  return cfg;
}

}  // namespace

int main() {
  criterion(1, "FCM membership and centroid updates match hand-derived values", 0.001,
            [](Outcome& o) {
              MatrixXd x(1, 1);
              x << 0.0;
              MatrixXd q(2, 1);
              q << 1.0, 2.0;
              const MatrixXd m = update_memberships(x, q, 2.0);
              o.require(std::abs(m(0, 0) - 0.8) <= 1e-12 && std::abs(m(1, 0) - 0.2) <= 1e-12,
                        "memberships differ from 0.8 / 0.2");
              MatrixXd pts(2, 2);
              pts << 0, 0, 2, 0;
              MatrixXd w(2, 2);
              w << 0.75, 0.25, 0.25, 0.75;
              const MatrixXd c = update_centroids(pts, w, 2.0);
              o.require(std::abs(c(0, 0) - 0.2) <= 1e-12 && std::abs(c(0, 1)) <= 1e-12,
                        "centroid differs from (0.2, 0)");
            });

  criterion(2, "FCM descent, column sums, and agreement with k-means on 3 blobs", 1.0,
            [](Outcome& o) {
              const auto blobs = testing::three_blobs();
              const auto res = fcm_fit(blobs.points, blob_config(2.0));
              for (std::size_t t = 1; t < res.objective_trace.size(); ++t) {
                const double prev = res.objective_trace[t - 1];
                o.require(res.objective_trace[t] <= prev + 1e-10 * std::abs(prev),
                          "objective increased at iteration " + std::to_string(t + 1));
              }
              const double sums =
                  (res.memberships.colwise().sum().array() - 1.0).abs().maxCoeff();
              o.require(sums <= 1e-9, "membership column sums off by " + std::to_string(sums));
              const double agree = testing::agreement_up_to_relabeling(
                  testing::argmax_labels(res.memberships),
                  testing::oracle_kmeans_labels(blobs.points, 3, 10, 99), 3);
              o.require(agree >= 0.95, "agreement " + std::to_string(agree));
            });

  criterion(3, "hard limit f = 1.001 gives max membership >= 0.99", 0, [](Outcome& o) {
    const auto blobs = testing::three_blobs();
    const auto res = fcm_fit(blobs.points, blob_config(1.001));
    const double worst = res.memberships.colwise().maxCoeff().minCoeff();
    o.require(worst >= 0.99, "smallest max membership " + std::to_string(worst));
  });

  criterion(4, "backprop matches central finite differences on 7-5-3-5-7", 1.0, [](Outcome& o) {
    auto model = build_autoencoder(7, 3, 11, {5});
    std::mt19937_64 rng(4);
    std::normal_distribution<double> noise(0.0, 0.3);
    for (auto* layer : model.stack()) {
      for (Index i = 0; i < layer->bias.size(); ++i) layer->bias(i) = noise(rng);
    }
    const MatrixXd batch = uniform_rows(6, 7, 21);
    const auto grads = backprop_gradients(model, batch);
    auto layers = model.stack();
    const double h = 1e-5;
    double worst = 0.0;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      auto& W = layers[l]->weights;
      std::uniform_int_distribution<Index> row(0, W.rows() - 1), col(0, W.cols() - 1);
      for (int s = 0; s < 10; ++s) {
        const Index r = row(rng), c = col(rng);
        const double saved = W(r, c);
        double up, down;
        W(r, c) = saved + h;
        backprop_gradients(model, batch, &up);
        W(r, c) = saved - h;
        backprop_gradients(model, batch, &down);
        W(r, c) = saved;
        const double numeric = (up - down) / (2 * h);
        const double analytic = grads[l].weights(r, c);
        const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
        worst = std::max(worst, std::abs(numeric - analytic) / scale);
      }
    }
    o.require(worst <= 1e-4, "worst relative error " + std::to_string(worst));
  });

  criterion(5, "autoencoder overfits 32 x 50 at p = 5; pretraining stays finite", 30.0,
            [](Outcome& o) {
              const MatrixXd X = uniform_rows(32, 50, 1);
              TrainConfig cfg;
              cfg.epochs = 500;
              cfg.seed = 3;
              auto model = build_autoencoder(50, 5, 7);
              const auto trace = fine_tune(X, model, cfg);
              o.require(trace.back() <= 0.1 * trace.front(),
                        "final/initial MSE " + std::to_string(trace.back() / trace.front()));

              TrainConfig pre;
              pre.epochs = 20;
              pre.seed = 5;
              auto pretrained = build_autoencoder(50, 5, 8);
              greedy_pretrain(X, pretrained, pre);
              const auto tail = fine_tune(X, pretrained, pre);
              bool finite = std::isfinite(tail.back());
              for (const auto* layer : pretrained.stack()) {
                finite = finite && layer->weights.allFinite() && layer->bias.allFinite();
              }
              o.require(finite, "non-finite weights after pretraining and fine-tuning");
            });

  criterion(6, "truncated SVD of 30 x 20 matches a dense oracle", 1.0, [](Outcome& o) {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> n01;
    MatrixXd D(30, 20);
    for (Index i = 0; i < D.size(); ++i) D(i) = n01(rng);
    const VectorXd oracle = testing::oracle_singular_values(D);
    for (auto method : {SvdMethod::Randomized, SvdMethod::Dense}) {
      const auto svd = truncated_svd(D, 5, 77, method);
      for (Index i = 0; i < 5; ++i) {
        o.require(std::abs(svd.singular_values(i) - oracle(i)) <= 1e-6 * oracle(i),
                  "singular value " + std::to_string(i) + " off");
      }
      const MatrixXd gram = svd.right_vectors.transpose() * svd.right_vectors;
      o.require((gram - MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-8,
                "right vectors not orthonormal");
    }
  });

  criterion(7, "planted topics recovered by DFCM and EFCM with coherent words", 120.0,
            [](Outcome& o) {
              std::istringstream emb(testing::planted_embeddings_text());
              const auto store = load_word_vectors(emb);
              for (Method method : {Method::Dfcm, Method::Efcm}) {
                int recovered = 0;
                for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                  const auto pc = testing::planted_corpus(seed);
                  const auto vocab = build_vocabulary(pc.docs, {});
                  const auto D = vectorize_tfidf(pc.docs, vocab);
                  PipelineConfig cfg;
                  cfg.method = method;
                  cfg.dim = 5;
                  cfg.fcm.clusters = 3;
                  cfg.fcm.fuzzifier = 1.1;
                  cfg.fcm.max_iter = 1000;
                  cfg.fcm.eps = 0.005;
                  cfg.seed = seed;
                  cfg.train.epochs = 10;
                  cfg.train.pretrain_epochs = 5;
                  const auto result = detect(D, vocab, cfg);
                  const auto lists = word_lists(result.topic_set);
                  if (!testing::planted_recovered(lists, 0.8)) continue;
                  ++recovered;
                  const auto report = evaluate(lists, store);
                  for (const auto& s : report.per_topic) {
                    o.require(s.score >= 0.8, std::string(to_string(method)) +
                                                  " recovered topic scored " +
                                                  std::to_string(s.score));
                  }
                  o.require(report.per_topic.size() == 3, "unscored recovered topic");
                }
                o.require(recovered >= 4, std::string(to_string(method)) + " recovered in " +
                                              std::to_string(recovered) + " of 5 seeds");
              }
            });

  criterion(8, "TC-W2V example, permutation invariance, and bounds", 0, [](Outcome& o) {
    std::istringstream in("x 1 0\ny 0 1\nz 0.7071067811865476 0.7071067811865476\n");
    const auto store = load_word_vectors(in);
    o.require(std::abs(tc_w2v({"x", "y", "z"}, store) - 0.47140452) <= 1e-6, "example score");

    std::mt19937_64 rng(3);
    std::normal_distribution<double> n01;
    std::ostringstream text;
    std::vector<std::string> words;
    for (int w = 0; w < 10; ++w) {
      words.push_back("w" + std::to_string(w));
      text << words.back();
      for (int k = 0; k < 4; ++k) text << ' ' << n01(rng);
      text << '\n';
    }
    std::istringstream rin(text.str());
    const auto random_store = load_word_vectors(rin);
    const double base = tc_w2v(words, random_store);
    for (int s = 0; s < 100; ++s) {
      std::shuffle(words.begin(), words.end(), rng);
      const double score = tc_w2v(words, random_store);
      o.require(std::abs(score - base) <= 1e-12, "score changed under permutation");
      o.require(score >= -1.0 && score <= 1.0, "score out of [-1, 1]");
    }
  });

  criterion(9, "preprocessing rules and pruning thresholds", 0, [](Outcome& o) {
    o.require(clean_text("Check https://x.co NOW @bob #energy") == "check now energy",
              "URL / mention / hashtag handling");
    o.require(clean_text("see www.enron.com and http://a.b/c") == "see and", "URL removal");
    o.require(clean_text("soooo cooool") == "soo cool", "repeated-letter collapse");
    const std::string samples[] = {"MiXeD CaSe", "#@bob", "HTTTP://x", "Zzzzz aaaAAA", "ok"};
    for (const auto& s : samples) {
      const std::string once = clean_text(s);
      o.require(clean_text(once) == once, "not idempotent on '" + s + "'");
      for (char ch : once) o.require(!(ch >= 'A' && ch <= 'Z'), "uppercase left in output");
    }
    o.require(pruning_threshold(5000) == 10, "threshold for 5000");
    o.require(pruning_threshold(50304) == 50, "threshold for 50304");
  });

  criterion(10, "detect and compare outputs are byte-identical across runs", 0, [](Outcome& o) {
    const fs::path dir = fs::temp_directory_path() / ("dfcm_accept_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
      const auto pc = testing::planted_corpus(8);
      std::ofstream corpus(dir / "corpus.jsonl");
      for (std::size_t d = 0; d < pc.docs.size(); ++d) {
        std::string text;
        for (const auto& t : pc.docs[d]) text += t + ' ';
        corpus << nlohmann::json{{"id", std::to_string(d)}, {"text", text}}.dump() << '\n';
      }
      std::ofstream emb(dir / "emb.txt");
      emb << testing::planted_embeddings_text();
    }
    std::ostringstream log;
    cmd_vectorize(dir / "corpus.jsonl", "", dir / "vec", log);
    RunConfig cfg;
    apply_config_json(cfg, nlohmann::json::parse(R"({
      "dim": 5, "clusters": 3, "seed": 5, "epochs": 3, "pretrain_epochs": 2,
      "hidden_layers": [32, 32], "compare_clusters": [2, 3], "compare_epochs": [2]
    })"));
    cfg.vectorized_dir = (dir / "vec").string();
    cfg.embeddings = (dir / "emb.txt").string();
    for (const char* run : {"a", "b"}) {
      cfg.output_dir = (dir / run).string();
      cmd_detect(cfg, log);
      cmd_compare(cfg, log);
    }
    o.require(slurp(dir / "a" / kTopicsFile) == slurp(dir / "b" / kTopicsFile),
              "topic sets differ");
    o.require(slurp(dir / "a" / kCompareFile) == slurp(dir / "b" / kCompareFile),
              "comparison tables differ");
    o.require(!slurp(dir / "a" / kCompareFile).empty(), "empty comparison table");
    fs::remove_all(dir);
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
