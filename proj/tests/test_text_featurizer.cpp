#include <doctest.h>

#include <cmath>
#include <fstream>

#include "pzsc/error.hpp"
#include "pzsc/rng.hpp"
#include "pzsc/text_featurizer.hpp"
#include "test_util.hpp"

using namespace pzsc;

namespace {

using Tokens = std::vector<std::string>;

TextCorpus two_docs(FeaturizerConfig* = nullptr) {
  TextCorpus c;
  c.documents = {{"c0", "red red wing"}, {"c1", "blue tail"}};
  return c;
}

FeaturizerConfig raw_config() {
  FeaturizerConfig cfg;
  cfg.l2_normalize = false;
  return cfg;
}

}  // namespace

TEST_CASE("tokenize splits on hyphens and drops stopwords") {
  FeaturizerConfig cfg;
  CHECK(tokenize("The red-winged Bird migrates.", cfg, {"the"}) ==
        Tokens{"red", "winged", "bird", "migrates"});
  CHECK(tokenize("", cfg, {}).empty());
  CHECK(tokenize("AAA aaa", cfg, {}) == Tokens{"aaa", "aaa"});
}

TEST_CASE("tokenize details") {
  FeaturizerConfig cfg;
  CHECK(tokenize("wing2tail 42", cfg, {}) == Tokens{"wing", "tail"});
  cfg.token_pattern = TokenPattern::kAlnumRuns;
  CHECK(tokenize("wing2tail 42", cfg, {}) == Tokens{"wing2tail", "42"});
  cfg = {};
  cfg.lowercase = false;
  CHECK(tokenize("Red red", cfg, {"red"}) == Tokens{"Red"});
  cfg = {};
  // Latin-1 letters stay inside words and fold case; the multiplication sign splits.
  CHECK(tokenize("Ÿ ÉCLAIR caf\xC3\xA9\xC3\x97x", cfg, {}) ==
        Tokens{"Ÿ", "éclair", "café", "x"});
  // stray continuation byte and a truncated sequence are separators
  CHECK(tokenize("ab\x80" "cd\xC3", cfg, {}) == Tokens{"ab", "cd"});
}

TEST_CASE("fit on two documents matches the hand-computed matrix") {
  const auto fitted = fit(two_docs(), raw_config());
  const auto& m = fitted.matrix;
  REQUIRE(m.vocab == Tokens{"blue", "red", "tail", "wing"});
  REQUIRE(m.class_ids == Tokens{"c0", "c1"});
  const double a = std::log(3.0 / 2.0) + 1.0;
  Matrix expected{{0.0, a}, {2.0 * a, 0.0}, {0.0, a}, {a, 0.0}};
  CHECK((m.values - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(m.values(1, 0) == doctest::Approx(2.8109).epsilon(1e-4));
  CHECK(fitted.vocabulary.idf().isApproxToConstant(a, 1e-15));
}

TEST_CASE("normalized two-document matrix") {
  const auto m = fit_transform(two_docs(), FeaturizerConfig{});
  Matrix expected{{0.0, 1.0 / std::sqrt(2.0)},
                  {2.0 / std::sqrt(5.0), 0.0},
                  {0.0, 1.0 / std::sqrt(2.0)},
                  {1.0 / std::sqrt(5.0), 0.0}};
  CHECK((m.values - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("plain idf and the single-document case") {
  auto cfg = raw_config();
  cfg.idf_variant = IdfVariant::kPlain;
  const auto m = fit_transform(two_docs(), cfg);
  CHECK(m.values(1, 0) == doctest::Approx(2.0 * std::log(2.0)));

  TextCorpus one;
  one.documents = {{"only", "wing wing crest"}};
  const auto single = fit_transform(one, raw_config());
  CHECK(single.values(0, 0) == 1.0);   // crest
  CHECK(single.values(1, 0) == 2.0);   // wing
}

TEST_CASE("transform drops unknown terms and reuses the fitted idf") {
  const auto fitted = fit(two_docs(), raw_config());
  const auto cfg = raw_config();
  const auto oov = transform({{"x", "green beak"}}, fitted.vocabulary, cfg, {});
  CHECK(oov.values.isZero(0.0));
  const auto red = transform({{"x", "red"}}, fitted.vocabulary, cfg, {});
  CHECK(red.values(1, 0) == doctest::Approx(std::log(1.5) + 1.0).epsilon(1e-15));
  CHECK(red.values.sum() == red.values(1, 0));

  for (bool norm : {false, true}) {
    FeaturizerConfig c;
    c.l2_normalize = norm;
    const auto f = fit(two_docs(), c);
    const auto again = transform(two_docs().documents, f.vocabulary, c, {});
    CHECK(again.values == f.matrix.values);
    CHECK(again.vocab == f.matrix.vocab);
  }
}

TEST_CASE("fit rejects empty corpora and bad min_df") {
  TextCorpus empty;
  empty.documents = {{"a", "the of"}, {"b", "  "}};
  empty.stopwords = {"the", "of"};
  CHECK_THROWS_AS(fit(empty, {}), InputError);
  FeaturizerConfig cfg;
  cfg.min_df = 3;
  CHECK_THROWS_AS(fit(two_docs(), cfg), InputError);
  cfg.min_df = 2;
  CHECK_THROWS_AS(fit(two_docs(), cfg), InputError);   // no term in both docs
}

TEST_CASE("min_df keeps only frequent terms") {
  TextCorpus c;
  c.documents = {{"a", "red wing"}, {"b", "red tail"}, {"c", "blue"}};
  FeaturizerConfig cfg;
  cfg.min_df = 2;
  const auto m = fit_transform(c, cfg);
  CHECK(m.vocab == Tokens{"red"});
  CHECK(m.values(0, 2) == 0.0);
}

TEST_CASE("random corpora: nonnegative, unit columns, deterministic") {
  Rng rng(11);
  const Tokens words{"alpha", "beta", "gamma", "delta", "the", "of", "wing", "tail"};
  for (int trial = 0; trial < 20; ++trial) {
    TextCorpus c;
    c.stopwords = {"the", "of"};
    for (int k = 0; k < 6; ++k) {
      std::string text;
      const auto len = 1 + rng.index(12);
      for (std::uint64_t w = 0; w < len; ++w) text += words[rng.index(words.size())] + " ";
      c.documents.push_back({"k" + std::to_string(k), text});
    }
    TfIdfFit a, b;
    try {
      a = fit(c, {});
      b = fit(c, {});
    } catch (const InputError&) {
      continue;   // every word was a stopword
    }
    CHECK(a.matrix.values == b.matrix.values);
    CHECK(a.matrix.values.minCoeff() >= 0.0);
    for (Index k = 0; k < a.matrix.num_classes(); ++k) {
      const double n = a.matrix.values.col(k).norm();
      if (n > 0.0) CHECK(std::abs(n - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("removing a stopword never lowers document frequencies") {
  Rng rng(5);
  const Tokens words{"the", "of", "and", "wing", "tail", "crest", "bill"};
  for (int trial = 0; trial < 20; ++trial) {
    TextCorpus c;
    for (int k = 0; k < 5; ++k) {
      std::string text;
      for (int w = 0; w < 8; ++w) text += words[rng.index(words.size())] + " ";
      c.documents.push_back({"k" + std::to_string(k), text});
    }
    c.stopwords = {"the", "of", "and", "bill"};
    auto before = fit(c, {});
    const auto victim = *std::next(c.stopwords.begin(),
                                   static_cast<long>(rng.index(c.stopwords.size())));
    c.stopwords.erase(victim);
    auto after = fit(c, {});
    for (Index i = 0; i < before.vocabulary.size(); ++i) {
      const auto& term = before.vocabulary.terms()[static_cast<std::size_t>(i)];
      const Index j = after.vocabulary.find(term);
      REQUIRE(j >= 0);
      const auto df = [](const TfIdfMatrix& m, Index row) {
        return (m.values.row(row).array() > 0.0).count();
      };
      CHECK(df(after.matrix, j) >= df(before.matrix, i));
    }
  }
}

TEST_CASE("stopword files and the default list") {
  const auto set = parse_stopwords("# header\nthe\n\nOf  \n  and\n");
  CHECK(set == StopwordSet{"the", "of", "and"});
  CHECK(default_stopwords().count("the") == 1);
  CHECK(default_stopwords().count("wing") == 0);
  CHECK_THROWS_AS(load_stopwords("/nonexistent/stopwords.txt"), InputError);
}

TEST_CASE("load_corpus from a directory and from JSON") {
  const auto dir = pzsc::testing::scratch_dir("corpus");
  std::ofstream(dir + "/b.txt") << "blue tail";
  std::ofstream(dir + "/a.txt") << "red red wing";
  std::ofstream(dir + "/notes.md") << "ignored";
  const auto from_dir = load_corpus(dir);
  CHECK(from_dir.class_ids() == Tokens{"a", "b"});
  CHECK(from_dir.documents[0].text == "red red wing");

  std::ofstream(dir + "/corpus.json") << R"({"z": "blue tail", "y": "red"})";
  const auto from_json = load_corpus(dir + "/corpus.json");
  CHECK(from_json.class_ids() == Tokens{"z", "y"});
  CHECK(from_json.subset({"y"}).documents.at(0).text == "red");
  CHECK_THROWS_AS(from_json.subset({"nope"}), InputError);
  CHECK_THROWS_AS(load_corpus(dir + "/missing.json"), InputError);
}

TEST_CASE("config names round trip") {
  for (auto p : {TokenPattern::kAlphaRuns, TokenPattern::kAlnumRuns}) {
    CHECK(parse_token_pattern(to_string(p)) == p);
  }
  for (auto v : {IdfVariant::kSmoothed, IdfVariant::kPlain}) {
    CHECK(parse_idf_variant(to_string(v)) == v);
  }
  CHECK_THROWS_AS(parse_idf_variant("bm25"), InputError);
}
