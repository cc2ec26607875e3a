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

#include <doctest.h>

#include <random>
#include <sstream>

#include "dfcm/textprep.hpp"
#include "support.hpp"

using namespace dfcm;

TEST_CASE("clean_text applies the cleaning rules") {
  CHECK(clean_text("Check https://x.co NOW @bob #energy") == "check now energy");
  CHECK(clean_text("") == "");
  CHECK(clean_text("soooo cooool") == "soo cool");
  CHECK(clean_text("see www.enron.com and http://a.b/c") == "see and");
  CHECK(clean_text("##tag #") == "tag");
  CHECK(clean_text("#@bob") == "");
  CHECK(clean_text("HTTTP://x") == "");  // collapses to http:// before the URL check
  CHECK(clean_text("1000000 !!!! aaa") == "1000000 !!!! aa");
  CHECK(clean_text("  spaced\t\nout ") == "spaced out");
}

TEST_CASE("repeat collapse agrees with a character-scan oracle") {
  std::mt19937_64 rng(3);
  const std::string alphabet = "aaabbbxyz.11!";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(1, 12);
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    for (int i = len(rng); i > 0; --i) s.push_back(alphabet[pick(rng)]);
    CHECK(clean_text(s) == testing::oracle_collapse(s));
  }
}

TEST_CASE("clean_text is idempotent") {
  std::mt19937_64 rng(17);
  const std::vector<std::string> pieces = {"www.", "http://", "https://", "@", "#", "##", "Aaa",
                                           "ooo", "TTT", "p", " ", "  ", "\t", ".", "x", "ht",
                                           "tp", ":", "/", "w", "'"};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len(0, 15);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    for (int i = len(rng); i > 0; --i) s += pieces[pick(rng)];
    const std::string once = clean_text(s);
    CHECK_MESSAGE(clean_text(once) == once, "input: '" << s << "'");
  }
}

TEST_CASE("tokenize strips surrounding punctuation only") {
  CHECK(tokenize("topic detection, again.") == TokenList{"topic", "detection", "again"});
  CHECK(tokenize("a  b") == TokenList{"a", "b"});
  CHECK(tokenize("don't stop") == TokenList{"don't", "stop"});
  CHECK(tokenize("(well-known) ... 'quoted'") == TokenList{"well-known", "quoted"});
  CHECK(tokenize("").empty());
}

TEST_CASE("pruning threshold") {
  CHECK(pruning_threshold(5000) == 10);
  CHECK(pruning_threshold(50304) == 50);
  CHECK(pruning_threshold(12) == 10);
  CHECK(pruning_threshold(10999) == 10);
  CHECK(pruning_threshold(11000) == 11);
}

TEST_CASE("build_vocabulary prunes by document frequency") {
  // 12 documents: energy in 11, power in exactly 10, gas in 9, oil in 3.
  std::vector<TokenList> corpus(12);
  for (int d = 0; d < 12; ++d) {
    if (d < 11) corpus[d].push_back("energy");
    if (d < 10) corpus[d].push_back("power");
    if (d < 9) corpus[d].push_back("gas");
    if (d < 3) corpus[d].insert(corpus[d].end(), {"oil", "oil"});
    corpus[d].push_back("the");
  }
  const Vocabulary vocab = build_vocabulary(corpus, {"the"});
  CHECK(vocab.threshold == 10);
  CHECK(vocab.terms == std::vector<std::string>{"energy", "power"});
  CHECK(vocab.doc_freq.at("energy") == 11);
  CHECK(vocab.doc_freq.at("power") == 10);
  CHECK(vocab.index.at("power") == 1);
  CHECK(vocab.n_docs == 12);
}

TEST_CASE("build_vocabulary invariants and errors") {
  CHECK_THROWS_AS(build_vocabulary({}, {}), Error);
  try {
    build_vocabulary({{"a"}, {"b"}}, {});
    FAIL("expected EmptyVocabulary");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyVocabulary);
  }

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> word(0, 30);
  std::vector<TokenList> corpus(200);
  for (auto& doc : corpus) {
    for (int i = 0; i < 8; ++i) doc.push_back("w" + std::to_string(word(rng) * word(rng) % 31));
  }
  const StopwordSet stop = {"w0", "w1"};
  const Vocabulary vocab = build_vocabulary(corpus, stop);
  std::map<std::string, std::size_t> df;
  for (const auto& doc : corpus) {
    std::set<std::string> uniq(doc.begin(), doc.end());
    for (const auto& t : uniq) df[t]++;
  }
  CHECK(std::is_sorted(vocab.terms.begin(), vocab.terms.end()));
  for (std::size_t i = 0; i < vocab.terms.size(); ++i) CHECK(vocab.index.at(vocab.terms[i]) == i);
  for (const auto& [term, count] : df) {
    const bool kept = vocab.index.contains(term);
    CHECK(kept == (!stop.contains(term) && count >= 10));
    if (kept) CHECK(vocab.doc_freq.at(term) == count);
  }
}

TEST_CASE("vectorize_tfidf matches a hand-computed table") {
  const std::vector<TokenList> corpus = {{"a", "a", "b"}, {"a", "c"}, {"b", "c"}};
  const Vocabulary vocab = build_vocabulary(corpus, {}, 1);
  const DocTermMatrix m = vectorize_tfidf(corpus, vocab);
  // N = 3, every df = 2: idf = ln(4/3) + 1.
  const double idf = 1.2876820724517809;
  Eigen::MatrixXd expected(3, 3);
  expected << 2 * idf, idf, 0,  //
      idf, 0, idf,              //
      0, idf, idf;
  CHECK(m.nonZeros() == 6);
  CHECK((Eigen::MatrixXd(m) - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("vectorize_tfidf edge cases") {
  const std::vector<TokenList> corpus = {{"x", "x", "y"}, {"x"}, {"z", "unknown"}};
  const Vocabulary vocab = build_vocabulary(corpus, {}, 1);
  const DocTermMatrix m = vectorize_tfidf({{"x", "x", "y"}, {"x"}, {"nothing", "here"}}, vocab);
  // x occurs in 2 of 3 documents.
  CHECK(m.coeff(0, vocab.index.at("x")) == doctest::Approx(2 * (std::log(4.0 / 3.0) + 1)));
  CHECK(Eigen::MatrixXd(m).row(2).isZero());

  const std::vector<TokenList> everywhere = {{"k", "k"}, {"k"}, {"k", "k", "k"}};
  const DocTermMatrix u = vectorize_tfidf(everywhere, build_vocabulary(everywhere, {}, 1));
  CHECK(u.coeff(0, 0) == 2.0);
  CHECK(u.coeff(2, 0) == 3.0);
}

TEST_CASE("document permutation permutes rows only") {
  const auto pc = testing::planted_corpus(9, 60, 8);
  std::vector<TokenList> docs = pc.docs;
  std::vector<std::size_t> perm(docs.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(1));
  std::vector<TokenList> shuffled;
  for (auto p : perm) shuffled.push_back(docs[p]);

  const Vocabulary v1 = build_vocabulary(docs, {}, 2);
  const Vocabulary v2 = build_vocabulary(shuffled, {}, 2);
  REQUIRE(v1.terms == v2.terms);
  const Eigen::MatrixXd a = vectorize_tfidf(docs, v1);
  const Eigen::MatrixXd b = vectorize_tfidf(shuffled, v2);
  for (std::size_t r = 0; r < perm.size(); ++r) {
    CHECK(b.row(static_cast<Index>(r)) == a.row(static_cast<Index>(perm[r])));
  }
  CHECK(a.minCoeff() >= 0.0);
}

TEST_CASE("triplet format round-trips exactly") {
  const auto pc = testing::planted_corpus(2, 30, 5);
  const Vocabulary vocab = build_vocabulary(pc.docs, {}, 1);
  const DocTermMatrix m = vectorize_tfidf(pc.docs, vocab);
  std::stringstream ss;
  write_triplets(m, ss);
  std::string header;
  std::getline(ss, header);
  CHECK(header == std::to_string(m.rows()) + " " + std::to_string(m.cols()) + " " +
                      std::to_string(m.nonZeros()));
  ss.seekg(0);
  const DocTermMatrix back = read_triplets(ss);
  CHECK(Eigen::MatrixXd(back) == Eigen::MatrixXd(m));

  std::stringstream bad("2 2 1\n0 5 1.0\n");
  CHECK_THROWS_AS(read_triplets(bad), Error);
  std::stringstream count("2 2 2\n0 0 1.0\n");
  CHECK_THROWS_AS(read_triplets(count), Error);
}

TEST_CASE("corpus reader validates records") {
  std::stringstream ok(R"({"id":"a","text":"Hello"}
{"id":"b","text":"World"}
)");
  auto docs = read_corpus_jsonl(ok);
  REQUIRE(docs.size() == 2);
  CHECK(docs[1].text == "World");

  std::stringstream dup(R"({"id":"a","text":"x"}
{"id":"a","text":"y"})");
  CHECK_THROWS_WITH_AS(read_corpus_jsonl(dup), doctest::Contains("line 2"), Error);
  std::stringstream missing(R"({"id":"a"})");
  CHECK_THROWS_AS(read_corpus_jsonl(missing), Error);
}
