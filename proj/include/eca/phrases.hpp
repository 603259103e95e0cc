#pragma once

// Unsupervised, language-agnostic keyphrase extraction built on per-term
// statistical features (casing, position, frequency, context relatedness,
// sentence spread). Lower scores are better.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace eca {

struct TermStats {
  std::string term;
  std::size_t tf = 1;
  std::size_t max_tf = 1;
  double mean_tf = 1.0;
  double std_tf = 0.0;
  double first_sentence_median = 0.0;  // median sentence index of the occurrences
  double sentence_fraction = 1.0;      // share of sentences containing the term
  std::size_t case_count = 0;          // capitalised (non-initial) or acronym occurrences
  double left_diversity = 0.0;         // distinct left neighbours / occurrences with one
  double right_diversity = 0.0;
};

struct Keyphrase {
  std::string text;
  double score = 0.0;
  std::size_t frequency = 0;
};

using StopwordSet = std::set<std::string>;

/// S(t) = (T_rel * T_pos) / (T_case + T_fnorm / T_rel + T_sent / T_rel).
double term_score(const TermStats& stats);

struct TextToken {
  std::string surface;
  std::string term;  // lowercased surface; empty for punctuation
  bool is_word = false;
};

/// Sentences of tokens. Words are maximal runs of word code points (internal
/// hyphens and apostrophes allowed); every other non-space code point is a
/// punctuation token. Sentences end after . ! ? or the danda.
std::vector<std::vector<TextToken>> tokenize_text(std::string_view text);

/// Feature statistics of every word term in the text. Frequency moments are
/// taken over non-stopword terms (over all terms when every term is a
/// stopword).
std::map<std::string, TermStats> compute_term_stats(std::string_view text, const StopwordSet& stopwords);

struct KeyphraseOptions {
  std::size_t k = 10;
  std::size_t max_ngram = 3;
  double dedup_similarity = 0.8;
};

/// Candidates are n-grams inside punctuation-free chunks that neither start
/// nor end with a stopword. Score(kw) = prod S(t) / (freq * (1 + sum S(t))).
/// Near-duplicates (normalized edit similarity >= threshold) keep the lower
/// score. Output ascending by score, ties lexicographic.
std::vector<Keyphrase> extract_keyphrases(std::string_view text, const StopwordSet& stopwords,
                                          const KeyphraseOptions& options = {});

/// 1 - levenshtein / max length, over code points.
double edit_similarity(std::string_view a, std::string_view b);

/// Curated stopword lists keyed by language tag. English ships built in.
class StopwordRegistry {
 public:
  StopwordRegistry();

  /// One term per line, UTF-8; blank lines and lines starting with '#' skipped.
  void load(const std::string& language, const std::filesystem::path& path);
  void set(const std::string& language, StopwordSet words) { curated_[language] = std::move(words); }
  const StopwordSet* find(std::string_view language) const;

 private:
  std::map<std::string, StopwordSet, std::less<>> curated_;
};

const StopwordSet& bundled_english_stopwords();

/// Curated list when one exists for `language`, otherwise the top 1% most
/// frequent terms of `text` that occur at least 5 times.
StopwordSet stopword_profile(std::string_view text, std::string_view language, const StopwordRegistry& registry);
StopwordSet frequency_stopwords(std::string_view text);

}  // namespace eca
