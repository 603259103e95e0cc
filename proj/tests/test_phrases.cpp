#include <gtest/gtest.h>

#include <cmath>

#include "eca/phrases.hpp"
#include "eca/util.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace eca;

namespace {

TermStats base_stats() {
  TermStats s;
  s.term = "t";
  s.tf = 1;
  s.max_tf = 1;
  s.mean_tf = 1;
  s.std_tf = 0;
  s.first_sentence_median = 0;
  s.sentence_fraction = 1;
  s.case_count = 0;
  return s;
}

void expect_matches_oracle(const std::string& text, const StopwordSet& stop, std::size_t k) {
  const auto oracle_scores = oracle::candidate_scores(text, stop);
  const auto out = extract_keyphrases(text, stop, {k, 3, 0.8});
  for (const auto& kp : out) {
    ASSERT_TRUE(oracle_scores.contains(kp.text)) << kp.text;
    EXPECT_NEAR(kp.score, oracle_scores.at(kp.text), 1e-9) << kp.text;
  }
  // the oracle's own ranking, then greedy near-duplicate removal
  std::vector<std::pair<double, std::string>> ranked;
  for (const auto& [t, s] : oracle_scores) ranked.emplace_back(s, t);
  // scores equal up to rounding count as ties, broken lexicographically
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (std::abs(a.first - b.first) > 1e-9) return a.first < b.first;
    return a.second < b.second;
  });
  std::vector<std::string> expected;
  for (const auto& [s, t] : ranked) {
    if (expected.size() >= k) break;
    bool dup = false;
    for (const auto& e : expected) dup = dup || edit_similarity(e, t) >= 0.8;
    if (!dup) expected.push_back(t);
  }
  std::vector<std::string> got;
  for (const auto& kp : out) got.push_back(kp.text);
  EXPECT_EQ(got, expected);
}

}  // namespace

TEST(TermScore, WorkedExample) {
  EXPECT_NEAR(term_score(base_stats()), std::log(std::log(3.0)) / 2.0, 1e-15);
  EXPECT_NEAR(term_score(base_stats()), 0.047024, 1e-6);
}

TEST(TermScore, MoreCasingLowersScore) {
  TermStats a = base_stats();
  a.tf = 3;
  a.max_tf = 3;
  a.case_count = 1;
  a.first_sentence_median = 2;
  TermStats b = a;
  b.case_count = 2;
  EXPECT_LT(term_score(b), term_score(a));
}

TEST(TermScore, EarlierTermScoresLower) {
  TermStats early = base_stats(), late = base_stats();
  late.first_sentence_median = 10;
  EXPECT_LT(term_score(early), term_score(late));
}

TEST(TermScore, FiniteOverRandomValidStats) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    TermStats s;
    s.tf = 1 + rng.index(20);
    s.max_tf = s.tf + rng.index(20);
    s.mean_tf = 1 + 5 * rng.uniform();
    s.std_tf = 3 * rng.uniform();
    s.first_sentence_median = 30 * rng.uniform();
    s.sentence_fraction = 0.01 + 0.99 * rng.uniform();
    s.case_count = rng.index(s.tf + 1);
    s.left_diversity = rng.uniform();
    s.right_diversity = rng.uniform();
    const double v = term_score(s);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, 0.0);
  }
}

TEST(Keyphrases, EmptyText) { EXPECT_TRUE(extract_keyphrases("", {}).empty()); }

TEST(Keyphrases, SingleSentenceAgainstOracle) {
  const std::string text = "heavy rain caused flash flooding";
  expect_matches_oracle(text, {}, 2);
  const auto all = extract_keyphrases(text, {}, {100, 3, 0.8});
  const auto oracle_scores = oracle::candidate_scores(text, {});
  EXPECT_EQ(oracle_scores.size(), 12u);  // 5 unigrams, 4 bigrams, 3 trigrams
  for (const auto& kp : all) EXPECT_NEAR(kp.score, oracle_scores.at(kp.text), 1e-12);
}

TEST(Keyphrases, LargeKReturnsAllSorted) {
  const std::string text = "Dam failure. Dam failure caused floods!";
  const auto out = extract_keyphrases(text, {}, {1000, 3, 1.01});  // threshold above 1 keeps everything
  EXPECT_EQ(out.size(), oracle::candidate_scores(text, {}).size());
  for (std::size_t i = 1; i < out.size(); ++i) EXPECT_LE(out[i - 1].score, out[i].score);
}

TEST(Keyphrases, FixtureTextMatchesOracle) {
  const std::string text = read_file(testing_support::data_dir() / "keyphrase_fixture.txt");
  expect_matches_oracle(text, bundled_english_stopwords(), 10);
  expect_matches_oracle(text, {}, 25);
}

TEST(Keyphrases, NoStopwordAtBoundaries) {
  const std::string text = read_file(testing_support::data_dir() / "keyphrase_fixture.txt");
  const auto& sw = bundled_english_stopwords();
  const auto out = extract_keyphrases(text, sw, {50, 3, 0.8});
  ASSERT_FALSE(out.empty());
  for (const auto& kp : out) {
    const auto words = split_whitespace(kp.text);
    ASSERT_GE(words.size(), 1u);
    ASSERT_LE(words.size(), 3u);
    EXPECT_FALSE(sw.contains(words.front())) << kp.text;
    EXPECT_FALSE(sw.contains(words.back())) << kp.text;
  }
}

TEST(Keyphrases, DeterministicBoundedSorted) {
  const std::string text = read_file(testing_support::data_dir() / "keyphrase_fixture.txt");
  const auto a = extract_keyphrases(text, bundled_english_stopwords(), {7, 3, 0.8});
  const auto b = extract_keyphrases(text, bundled_english_stopwords(), {7, 3, 0.8});
  ASSERT_EQ(a.size(), b.size());
  EXPECT_LE(a.size(), 7u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].text, b[i].text);
    EXPECT_EQ(a[i].score, b[i].score);
    if (i) EXPECT_LE(a[i - 1].score, a[i].score);
  }
}

TEST(Keyphrases, NearDuplicatesCollapse) {
  const auto out = extract_keyphrases("Flood flooding. Flood. Flooding.", {}, {10, 1, 0.8});
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j) EXPECT_LT(edit_similarity(out[i].text, out[j].text), 0.8);
}

TEST(Keyphrases, SelfConcatenationKeepsScaleFreeFeatures) {
  const std::string text = read_file(testing_support::data_dir() / "keyphrase_fixture.txt");
  const auto once = compute_term_stats(text, bundled_english_stopwords());
  const auto twice = compute_term_stats(text + "\n" + text, bundled_english_stopwords());
  ASSERT_EQ(once.size(), twice.size());
  for (const auto& [term, a] : once) {
    const TermStats& b = twice.at(term);
    EXPECT_EQ(b.tf, 2 * a.tf);
    EXPECT_NEAR(static_cast<double>(a.tf) / a.max_tf, static_cast<double>(b.tf) / b.max_tf, 1e-12);
    EXPECT_NEAR(a.tf / (a.mean_tf + a.std_tf), b.tf / (b.mean_tf + b.std_tf), 1e-12);
    EXPECT_NEAR(a.sentence_fraction, b.sentence_fraction, 1e-12);
  }
}

TEST(Tokenize, DandaEndsSentences) {
  const auto s = tokenize_text("भारी बारिश हुई। नदी में बाढ़ आई।");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0][0].term, "भारी");
  EXPECT_FALSE(s[0].back().is_word);
}

TEST(Tokenize, HyphenatedWordsStayWhole) {
  const auto s = tokenize_text("flood-hit areas, don't panic");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0][0].term, "flood-hit");
  EXPECT_EQ(s[0][3].term, "don't");
}

TEST(Stopwords, HundredDistinctTermsGiveNone) {
  std::string text;
  for (int i = 0; i < 100; ++i) text += "w" + std::to_string(i) + " ";
  EXPECT_TRUE(frequency_stopwords(text).empty());
}

TEST(Stopwords, EnglishUsesBundledList) {
  StopwordRegistry reg;
  EXPECT_EQ(stopword_profile("anything at all", "en", reg), bundled_english_stopwords());
}

TEST(Stopwords, FrequentHindiParticleDetected) {
  // 200 tokens, 20 of them "की" (10%)
  std::string text;
  for (int i = 0; i < 180; ++i) {
    text += "शब्द" + std::to_string(i % 60) + " ";
    if (i % 9 == 0) text += "की ";
  }
  StopwordRegistry reg;
  const auto sw = stopword_profile(text, "hi", reg);
  EXPECT_TRUE(sw.contains("की"));
}

TEST(Stopwords, LoadedListWins) {
  const auto dir = testing_support::scratch_dir("stop");
  write_file_atomic(dir / "hi.txt", "# comment\nकी\n\nहै\n");
  StopwordRegistry reg;
  reg.load("hi", dir / "hi.txt");
  EXPECT_EQ(stopword_profile("x", "hi", reg), (StopwordSet{"की", "है"}));
}
