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

// dfcm: topic detection with autoencoder- or SVD-reduced fuzzy c-means.
//
//   dfcm vectorize --corpus docs.jsonl [--stopwords list.txt] --out vec/
//   dfcm detect    --config run.json --seed 7 [overrides]
//   dfcm evaluate  --topics out/topics.json --embeddings vectors.txt --out report.json
//   dfcm compare   --config sweep.json --seed 7 [overrides]
//
// Exit status: 0 success, 1 usage/config, 2 data error, 3 numerical failure.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dfcm/commands.hpp"

namespace {

struct Overrides {
  std::optional<std::string> method, vectorized, out, embeddings, optimizer;
  std::optional<long long> dim, clusters, batch_size, top_n;
  std::optional<int> max_iter, init_runs, epochs, pretrain_epochs;
  std::optional<double> fuzzifier, eps, learning_rate, dropout;
  std::optional<std::uint64_t> seed;

  void add(CLI::App* cmd) {
    cmd->add_option("--method", method, "dfcm or efcm");
    cmd->add_option("--dim", dim, "Reduced dimension p");
    cmd->add_option("--clusters", clusters, "Number of topics c");
    cmd->add_option("--fuzzifier", fuzzifier, "Fuzzification constant f > 1");
    cmd->add_option("--max-iter", max_iter, "FCM iteration cap T");
    cmd->add_option("--eps", eps, "FCM membership-change threshold");
    cmd->add_option("--init-runs", init_runs, "k-means restarts for initialization");
    cmd->add_option("--epochs", epochs, "Autoencoder fine-tuning epochs");
    cmd->add_option("--pretrain-epochs", pretrain_epochs, "Epochs per denoising layer");
    cmd->add_option("--batch-size", batch_size, "Minibatch size");
    cmd->add_option("--learning-rate", learning_rate, "Optimizer step size");
    cmd->add_option("--dropout", dropout, "Denoising dropout rate");
    cmd->add_option("--optimizer", optimizer, "adaptive_moments or sgd_momentum");
    cmd->add_option("--top-n", top_n, "Words per topic");
    cmd->add_option("--vectorized", vectorized, "Directory written by 'vectorize'");
    cmd->add_option("--out", out, "Output directory");
    cmd->add_option("--embeddings", embeddings, "Word vectors (text format)");
    cmd->add_option("--seed", seed, "Global random seed")->required();
  }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    auto put = [&](const char* key, const auto& v) {
      if (v) j[key] = *v;
    };
    put("method", method);
    put("dim", dim);
    put("clusters", clusters);
    put("fuzzifier", fuzzifier);
    put("max_iter", max_iter);
    put("eps", eps);
    put("init_runs", init_runs);
    put("epochs", epochs);
    put("pretrain_epochs", pretrain_epochs);
    put("batch_size", batch_size);
    put("learning_rate", learning_rate);
    put("dropout", dropout);
    put("optimizer", optimizer);
    put("top_n", top_n);
    put("vectorized_dir", vectorized);
    put("output_dir", out);
    put("embeddings", embeddings);
    put("seed", seed);
    return j;
  }
};

dfcm::RunConfig resolve(const std::string& config_path, const Overrides& o) {
  dfcm::RunConfig cfg = config_path.empty() ? dfcm::RunConfig{} : dfcm::load_run_config(config_path);
  dfcm::apply_config_json(cfg, o.to_json());
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic detection with deep-autoencoder and eigenspace fuzzy c-means"};
  app.require_subcommand(1);

  auto* vectorize = app.add_subcommand("vectorize", "Clean, tokenize and TF-IDF weight a corpus");
  std::string corpus, stopwords, vec_out;
  vectorize->add_option("--corpus", corpus, "JSON-lines corpus with id and text")->required();
  vectorize->add_option("--stopwords", stopwords, "Stopword list, one per line");
  vectorize->add_option("--out", vec_out, "Output directory")->required();

  auto* detect = app.add_subcommand("detect", "Detect topics");
  std::string detect_config;
  Overrides detect_over;
  detect->add_option("--config", detect_config, "Run configuration JSON");
  detect_over.add(detect);

  auto* evaluate = app.add_subcommand("evaluate", "Score topics with TC-W2V");
  std::string topics_path, embeddings_path, report_path;
  evaluate->add_option("--topics", topics_path, "topics.json from 'detect'")->required();
  evaluate->add_option("--embeddings", embeddings_path, "Word vectors (text format)")->required();
  evaluate->add_option("--out", report_path, "Report JSON path")->required();

  auto* compare = app.add_subcommand("compare", "Sweep methods and topic counts");
  std::string compare_config;
  Overrides compare_over;
  compare->add_option("--config", compare_config, "Run configuration JSON");
  compare_over.add(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*vectorize) {
      dfcm::cmd_vectorize(corpus, stopwords, vec_out, std::cout);
    } else if (*detect) {
      dfcm::cmd_detect(resolve(detect_config, detect_over), std::cout);
    } else if (*evaluate) {
      dfcm::cmd_evaluate(topics_path, embeddings_path, report_path, std::cout);
    } else if (*compare) {
      auto failed = dfcm::cmd_compare(resolve(compare_config, compare_over), std::cout);
      if (failed > 0) std::cerr << failed << " sweep cell(s) failed\n";
    }
  } catch (const dfcm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dfcm::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
