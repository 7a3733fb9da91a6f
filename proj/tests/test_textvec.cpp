#include <gtest/gtest.h>

#include <cmath>

#include "ccx/corpus.hpp"
#include "ccx/textvec.hpp"
#include "test_util.hpp"

using namespace ccx;

namespace {
double norm(const SparseVector& v) {
  double s = 0;
  for (const auto& e : v) s += e.weight * e.weight;
  return std::sqrt(s);
}
}  // namespace

TEST(Tokenize, LowercasesAndSplitsOnNonAlnum) {
  EXPECT_EQ(tokenize("Hello, WORLD!! x-2y"), (std::vector<std::string>{"hello", "world", "x", "2y"}));
  EXPECT_TRUE(tokenize("?! ...").empty());
}

TEST(Tokenize, TranscriptIncludesBothSpeakers) {
  Transcript t{"a", {{Speaker::customer, "Refund please"}, {Speaker::agent, "Sure."}}, 0, "g"};
  EXPECT_EQ(tokenize(t), (std::vector<std::string>{"refund", "please", "sure"}));
}

TEST(Vocabulary, HandCountedDocumentFrequencies) {
  const std::vector<std::vector<std::string>> docs{{"a", "b"}, {"b", "c"}};
  const auto v = fit_vocabulary(docs, 1);
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(v.doc_freq(), (std::vector<int>{1, 2, 1}));
  EXPECT_EQ(v.documents(), 2);
  const auto v2 = fit_vocabulary(docs, 2);
  EXPECT_EQ(v2.tokens(), (std::vector<std::string>{"b"}));
}

TEST(Vocabulary, RepeatedTokenCountsOncePerDocument) {
  const auto v = fit_vocabulary(std::vector<std::vector<std::string>>{{"a", "a", "a"}, {"b"}}, 1);
  EXPECT_EQ(v.doc_freq(), (std::vector<int>{1, 1}));
}

TEST(Vocabulary, EmptyCorpusIsAnError) {
  EXPECT_THROW(fit_vocabulary(std::vector<std::vector<std::string>>{}, 1), Error);
}

TEST(Vocabulary, IdfFormula) {
  const auto v = fit_vocabulary(std::vector<std::vector<std::string>>{{"a", "b"}, {"b", "c"}}, 1);
  EXPECT_DOUBLE_EQ(v.idf(v.index_of("b")), 1.0);
  EXPECT_DOUBLE_EQ(v.idf(v.index_of("a")), std::log(3.0 / 2.0) + 1.0);
  EXPECT_LT(v.index_of("zzz"), 0);
}

TEST(Vectorize, OutOfVocabularyGivesZeroVector) {
  const auto v = fit_vocabulary(std::vector<std::vector<std::string>>{{"a"}, {"a"}}, 1);
  EXPECT_TRUE(vectorize(v, std::vector<std::string>{"q", "r"}).empty());
}

TEST(Vectorize, SingleTokenIsUnitOneHot) {
  const auto v = fit_vocabulary(std::vector<std::vector<std::string>>{{"a", "b"}, {"b", "c"}}, 1);
  const auto x = vectorize(v, std::vector<std::string>{"c"});
  ASSERT_EQ(x.size(), 1u);
  EXPECT_EQ(x[0].index, v.index_of("c"));
  EXPECT_NEAR(x[0].weight, 1.0, 1e-12);
}

TEST(Vectorize, TfIdfThenL2) {
  const auto v = fit_vocabulary(std::vector<std::vector<std::string>>{{"a", "b"}, {"b", "c"}}, 1);
  const auto x = vectorize(v, std::vector<std::string>{"a", "b", "b", "zz"});
  const double wa = 1.0 * (std::log(1.5) + 1.0), wb = 2.0 * 1.0;
  const double n = std::hypot(wa, wb);
  ASSERT_EQ(x.size(), 2u);
  EXPECT_NEAR(value_at(x, v.index_of("a")), wa / n, 1e-12);
  EXPECT_NEAR(value_at(x, v.index_of("b")), wb / n, 1e-12);
}

TEST(Vectorize, PropertiesOnGeneratedCorpus) {
  CorpusConfig c;
  c.n_contacts = 300;
  const auto g = generate_corpus(c);
  const auto v = fit_vocabulary(g.corpus.transcripts, 2);
  for (const auto& t : g.corpus.transcripts) {
    const auto x = vectorize(v, t);
    EXPECT_EQ(x, vectorize(v, t));
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_LT(x[i].index, v.size());
      EXPECT_TRUE(std::isfinite(x[i].weight));
      if (i > 0) {
        EXPECT_GT(x[i].index, x[i - 1].index);
      }
    }
    if (!x.empty()) {
      EXPECT_NEAR(norm(x), 1.0, 1e-9);
    }
  }
}

TEST(VocabularyFile, RoundTrip) {
  ccx::testing::TempDir d;
  CorpusConfig c;
  c.n_contacts = 200;
  const auto v = fit_vocabulary(generate_corpus(c).corpus.transcripts, 2);
  save_vocabulary(d.file("v.csv"), v);
  EXPECT_EQ(load_vocabulary(d.file("v.csv")), v);
  const auto text = ccx::testing::slurp(d.file("v.csv"));
  EXPECT_NE(text.find("token,index,df"), std::string::npos);
}
