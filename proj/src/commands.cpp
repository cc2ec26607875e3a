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

#include "dfcm/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>

#include "dfcm/checkpoint.hpp"

namespace dfcm {

namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
}

void append_log(const fs::path& dir, const std::string& message) {
  std::ofstream out(dir / kLogFile, std::ios::app);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  out << stamp << ' ' << message << '\n';
}

void write_matrix_text(const Matrix<double>& m, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) out << (c ? " " : "") << fmt17(m(r, c));
    out << '\n';
  }
}

template <typename T>
void write_lines(const std::vector<T>& values, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  for (const auto& v : values) out << fmt17(static_cast<double>(v)) << '\n';
}

}  // namespace

VectorizeSummary cmd_vectorize(const fs::path& corpus_path, const fs::path& stopwords_path,
                               const fs::path& out_dir, std::ostream& log) {
  const auto docs = read_corpus_jsonl(corpus_path);
  const StopwordSet stopwords = stopwords_path.empty() ? StopwordSet{} : read_stopwords(stopwords_path);

  std::vector<TokenList> corpus;
  corpus.reserve(docs.size());
  for (const auto& d : docs) corpus.push_back(tokenize(clean_text(d.text)));

  const Vocabulary vocab = build_vocabulary(corpus, stopwords);
  const DocTermMatrix matrix = vectorize_tfidf(corpus, vocab);

  ensure_dir(out_dir);
  write_vocabulary_json(vocab, out_dir / kVocabularyFile);
  write_triplets(matrix, out_dir / kMatrixFile);
  {
    std::ofstream ids(out_dir / kDocumentsFile);
    for (const auto& d : docs) ids << d.id << '\n';
  }

  VectorizeSummary summary{docs.size(), vocab.size(), static_cast<std::size_t>(matrix.nonZeros())};
  log << "documents " << summary.documents << "\nterms " << summary.terms << "\nnonzeros "
      << summary.nonzeros << '\n';
  append_log(out_dir, "vectorize " + corpus_path.string() + ": " + std::to_string(summary.documents) +
                          " documents, " + std::to_string(summary.terms) + " terms");
  return summary;
}

DetectionResult cmd_detect(const RunConfig& cfg, std::ostream& log) {
  const fs::path in_dir = cfg.vectorized_dir;
  const Vocabulary vocab = read_vocabulary_json(in_dir / kVocabularyFile);
  const DocTermMatrix matrix = read_triplets(in_dir / kMatrixFile);

  PipelineConfig pipeline = cfg.pipeline;
  pipeline.allow_degenerate = true;
  DetectionResult result = detect(matrix, vocab, pipeline);

  const fs::path out_dir = cfg.output_dir;
  ensure_dir(out_dir);
  write_topicset(result.topic_set, out_dir / kTopicsFile);
  write_matrix_text(result.fcm.memberships, out_dir / kMembershipsFile);
  write_lines(result.fcm.objective_trace, out_dir / kObjectiveFile);
  if (result.model) {
    save_checkpoint(*result.model, out_dir / kModelFile);
    TrainConfig train = pipeline.train;
    train.seed = mix_seed(pipeline.seed, "autoencoder");
    write_checkpoint_sidecar(out_dir / kModelSidecarFile, train,
                             result.finetune_trace.empty() ? 0.0 : result.finetune_trace.back());
  }

  log << to_string(pipeline.method) << ": " << result.topic_set.topics.size() << " topics, FCM "
      << result.fcm.iterations << " iterations" << (result.fcm.converged ? " (converged)" : "")
      << '\n';
  for (std::size_t i = 0; i < result.topic_set.topics.size(); ++i) {
    log << "  " << i << ':';
    for (const auto& w : result.topic_set.topics[i].words) log << ' ' << w.term;
    log << '\n';
  }
  append_log(out_dir, std::string("detect ") + to_string(pipeline.method) + " seed " +
                          std::to_string(pipeline.seed));

  if (!result.topic_set.degenerate.empty()) {
    throw Error(ErrorCode::DegenerateTopics,
                std::to_string(result.topic_set.degenerate.size()) +
                    " topic(s) are zero vectors after rectification; see " +
                    (out_dir / kTopicsFile).string());
  }
  return result;
}

CoherenceReport cmd_evaluate(const fs::path& topics_path, const fs::path& embeddings_path,
                             const fs::path& out_path, std::ostream& log) {
  const TopicSet topics = read_topicset(topics_path);
  const WordVectorStore store = load_word_vectors(embeddings_path);
  for (const auto& w : store.warnings) log << "warning: " << w << '\n';
  CoherenceReport report = evaluate(topics, store);
  if (out_path.has_parent_path()) ensure_dir(out_path.parent_path());
  write_report(report, out_path);
  log << "scored " << report.per_topic.size() << " topics, skipped "
      << report.skipped_topics.size() << ", mean " << report.mean_score << '\n';
  return report;
}

std::uint64_t cell_seed(std::uint64_t seed, Method method, Index clusters, int epochs) {
  std::uint64_t s = mix_seed(seed, to_string(method));
  s = mix_seed(s, static_cast<std::uint64_t>(clusters));
  return mix_seed(s, static_cast<std::uint64_t>(epochs));
}

std::size_t cmd_compare(const RunConfig& cfg, std::ostream& log) {
  if (cfg.embeddings.empty()) {
    throw Error(ErrorCode::InvalidConfig, "compare needs 'embeddings'");
  }
  const fs::path in_dir = cfg.vectorized_dir;
  const Vocabulary vocab = read_vocabulary_json(in_dir / kVocabularyFile);
  const DocTermMatrix matrix = read_triplets(in_dir / kMatrixFile);
  const WordVectorStore store = load_word_vectors(cfg.embeddings);

  const fs::path out_dir = cfg.output_dir;
  ensure_dir(out_dir);
  std::ofstream csv(out_dir / kCompareFile);
  if (!csv) throw Error(ErrorCode::Io, "cannot write " + (out_dir / kCompareFile).string());
  csv << "method,p,c,epochs,mean_score,status,per_topic_scores\n";

  std::size_t failures = 0;
  for (const auto& method_name : cfg.compare_methods) {
    const Method method = parse_method(method_name);
    // EFCM has no training epochs; it contributes one row per topic count.
    std::vector<int> epochs_list = method == Method::Dfcm ? cfg.compare_epochs : std::vector<int>{0};
    for (Index c : cfg.compare_clusters) {
      for (int epochs : epochs_list) {
        PipelineConfig p = cfg.pipeline;
        p.method = method;
        p.fcm.clusters = c;
        if (method == Method::Dfcm) p.train.epochs = epochs;
        p.seed = cell_seed(cfg.pipeline.seed, method, c, epochs);

        std::string mean = "";
        std::string status = "ok";
        std::string scores;
        try {
          const DetectionResult result = detect(matrix, vocab, p);
          const CoherenceReport report = evaluate(result.topic_set, store);
          if (!std::isnan(report.mean_score)) mean = fmt17(report.mean_score);
          for (const auto& s : report.per_topic) {
            scores += (scores.empty() ? "" : ";") + fmt17(s.score);
          }
          if (!report.skipped_topics.empty()) {
            status = "ok (" + std::to_string(report.skipped_topics.size()) + " topics unscored)";
          }
        } catch (const Error& e) {
          ++failures;
          status = std::string("error ") + to_string(e.code());
          log << "cell " << method_name << " c=" << c << " epochs=" << epochs
              << " failed: " << e.what() << '\n';
        }
        csv << method_name << ',' << p.dim << ',' << c << ','
            << (method == Method::Dfcm ? std::to_string(epochs) : std::string()) << ',' << mean
            << ',' << status << ',' << scores << '\n';
        log << method_name << " c=" << c << " epochs=" << epochs << " mean=" << mean << '\n';
      }
    }
  }
  append_log(out_dir, "compare seed " + std::to_string(cfg.pipeline.seed) + ", " +
                          std::to_string(failures) + " failed cells");
  return failures;
}

}  // namespace dfcm
