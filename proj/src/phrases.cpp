#include "eca/phrases.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eca/error.hpp"
#include "eca/util.hpp"

namespace eca {

double term_score(const TermStats& s) {
  const double tf = static_cast<double>(s.tf);
  const double t_case = static_cast<double>(s.case_count) / (1.0 + std::log(tf));
  const double t_pos = std::log(std::log(3.0 + s.first_sentence_median));
  const double t_fnorm = tf / (s.mean_tf + s.std_tf);
  const double t_rel = 1.0 + (s.left_diversity + s.right_diversity) * tf / static_cast<double>(s.max_tf);
  const double t_sent = s.sentence_fraction;
  return (t_rel * t_pos) / (t_case + t_fnorm / t_rel + t_sent / t_rel);
}

namespace {

bool is_sentence_end(char32_t c) { return c == U'.' || c == U'!' || c == U'?' || c == U'।'; }

bool is_joiner(char32_t c) { return c == U'-' || c == U'\'' || c == U'’'; }

}  // namespace

std::vector<std::vector<TextToken>> tokenize_text(std::string_view text) {
  const std::u32string cps = utf8_decode(text);
  std::vector<std::vector<TextToken>> sentences(1);
  std::size_t i = 0;
  while (i < cps.size()) {
    const char32_t c = cps[i];
    if (is_word_codepoint(c)) {
      std::size_t j = i + 1;
      while (j < cps.size()) {
        if (is_word_codepoint(cps[j])) {
          ++j;
        } else if (is_joiner(cps[j]) && j + 1 < cps.size() && is_word_codepoint(cps[j + 1])) {
          j += 2;
        } else {
          break;
        }
      }
      std::string surface = utf8_encode(cps.substr(i, j - i));
      sentences.back().push_back({surface, to_lower(surface), true});
      i = j;
      continue;
    }
    if (c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == 0xA0) {
      ++i;
      continue;
    }
    sentences.back().push_back({utf8_encode(std::u32string(1, c)), "", false});
    ++i;
    if (is_sentence_end(c)) sentences.emplace_back();
  }
  std::erase_if(sentences, [](const auto& s) {
    return std::none_of(s.begin(), s.end(), [](const TextToken& t) { return t.is_word; });
  });
  return sentences;
}

namespace {

bool is_capitalised(std::string_view surface) {
  const std::u32string cps = utf8_decode(surface);
  return !cps.empty() && is_upper_codepoint(cps.front());
}

bool is_acronym(std::string_view surface) {
  const std::u32string cps = utf8_decode(surface);
  std::size_t letters = 0;
  for (char32_t c : cps) {
    if (c < 0x80 && std::isalpha(static_cast<int>(c))) {
      if (!is_upper_codepoint(c)) return false;
      ++letters;
    }
  }
  return letters >= 2;
}

struct Accumulator {
  std::size_t tf = 0;
  std::vector<std::size_t> sentences;  // one entry per occurrence
  std::size_t case_count = 0;
  std::set<std::string> left, right;
  std::size_t left_total = 0, right_total = 0;
};

}  // namespace

std::map<std::string, TermStats> compute_term_stats(std::string_view text, const StopwordSet& stopwords) {
  const auto sentences = tokenize_text(text);
  std::map<std::string, Accumulator> acc;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const auto& toks = sentences[s];
    bool first_word = true;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (!toks[i].is_word) continue;
      auto& a = acc[toks[i].term];
      ++a.tf;
      a.sentences.push_back(s);
      if ((!first_word && is_capitalised(toks[i].surface)) || is_acronym(toks[i].surface)) ++a.case_count;
      first_word = false;
      if (i > 0 && toks[i - 1].is_word) {
        a.left.insert(toks[i - 1].term);
        ++a.left_total;
      }
      if (i + 1 < toks.size() && toks[i + 1].is_word) {
        a.right.insert(toks[i + 1].term);
        ++a.right_total;
      }
    }
  }

  std::vector<double> tfs;
  for (const auto& [term, a] : acc) {
    if (!stopwords.contains(term)) tfs.push_back(static_cast<double>(a.tf));
  }
  if (tfs.empty()) {
    for (const auto& [term, a] : acc) tfs.push_back(static_cast<double>(a.tf));
  }
  double mean = 0, var = 0, max_tf = 1;
  if (!tfs.empty()) {
    mean = std::accumulate(tfs.begin(), tfs.end(), 0.0) / static_cast<double>(tfs.size());
    for (double t : tfs) var += (t - mean) * (t - mean);
    var /= static_cast<double>(tfs.size());
    max_tf = *std::max_element(tfs.begin(), tfs.end());
  }

  std::map<std::string, TermStats> out;
  for (auto& [term, a] : acc) {
    TermStats st;
    st.term = term;
    st.tf = a.tf;
    // stopwords can out-count every content term; keep tf / max_tf <= 1
    st.max_tf = std::max<std::size_t>(static_cast<std::size_t>(max_tf), a.tf);
    st.mean_tf = mean;
    st.std_tf = std::sqrt(var);
    auto& pos = a.sentences;  // already sorted
    const std::size_t n = pos.size();
    st.first_sentence_median =
        n % 2 ? static_cast<double>(pos[n / 2]) : (static_cast<double>(pos[n / 2 - 1]) + static_cast<double>(pos[n / 2])) / 2.0;
    std::set<std::size_t> distinct(pos.begin(), pos.end());
    st.sentence_fraction = static_cast<double>(distinct.size()) / static_cast<double>(sentences.size());
    st.case_count = a.case_count;
    st.left_diversity = a.left_total ? static_cast<double>(a.left.size()) / static_cast<double>(a.left_total) : 0.0;
    st.right_diversity =
        a.right_total ? static_cast<double>(a.right.size()) / static_cast<double>(a.right_total) : 0.0;
    out.emplace(term, std::move(st));
  }
  return out;
}

double edit_similarity(std::string_view a, std::string_view b) {
  const std::u32string x = utf8_decode(a);
  const std::u32string y = utf8_decode(b);
  const std::size_t longest = std::max(x.size(), y.size());
  if (longest == 0) return 1.0;
  std::vector<std::size_t> prev(y.size() + 1), cur(y.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return 1.0 - static_cast<double>(prev[y.size()]) / static_cast<double>(longest);
}

std::vector<Keyphrase> extract_keyphrases(std::string_view text, const StopwordSet& stopwords,
                                          const KeyphraseOptions& options) {
  if (options.k == 0) return {};
  const auto stats = compute_term_stats(text, stopwords);
  std::map<std::string, double> score_of;
  for (const auto& [term, st] : stats) score_of[term] = term_score(st);

  struct Candidate {
    std::vector<std::string> terms;
    std::size_t freq = 0;
  };
  std::map<std::string, Candidate> candidates;
  for (const auto& sentence : tokenize_text(text)) {
    std::size_t i = 0;
    while (i < sentence.size()) {
      if (!sentence[i].is_word) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < sentence.size() && sentence[j].is_word) ++j;
      for (std::size_t b = i; b < j; ++b) {
        for (std::size_t len = 1; len <= options.max_ngram && b + len <= j; ++len) {
          const auto& first = sentence[b].term;
          const auto& last = sentence[b + len - 1].term;
          if (stopwords.contains(first) || stopwords.contains(last)) continue;
          std::vector<std::string> terms;
          for (std::size_t t = b; t < b + len; ++t) terms.push_back(sentence[t].term);
          std::string key = join(terms, " ");
          auto& c = candidates[key];
          c.terms = std::move(terms);
          ++c.freq;
        }
      }
      i = j;
    }
  }

  std::vector<Keyphrase> scored;
  for (const auto& [key, c] : candidates) {
    // canonical order, so equal term-score multisets give bit-equal scores
    std::vector<double> parts;
    for (const auto& t : c.terms) parts.push_back(score_of.at(t));
    std::sort(parts.begin(), parts.end());
    double prod = 1.0, sum = 0.0;
    for (double x : parts) {
      prod *= x;
      sum += x;
    }
    scored.push_back({key, prod / (static_cast<double>(c.freq) * (1.0 + sum)), c.freq});
  }
  std::sort(scored.begin(), scored.end(), [](const Keyphrase& a, const Keyphrase& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.text < b.text;
  });

  std::vector<Keyphrase> out;
  for (auto& cand : scored) {
    if (out.size() >= options.k) break;
    bool duplicate = std::any_of(out.begin(), out.end(), [&](const Keyphrase& kept) {
      return edit_similarity(kept.text, cand.text) >= options.dedup_similarity;
    });
    if (!duplicate) out.push_back(std::move(cand));
  }
  return out;
}

// ---------------------------------------------------------------------------

const StopwordSet& bundled_english_stopwords() {
  static const StopwordSet kWords = {
      "a",       "about",   "above",  "after",   "again",  "against", "all",     "also",    "am",     "an",
      "and",     "any",     "are",    "as",      "at",     "be",      "because", "been",    "before", "being",
      "below",   "between", "both",   "but",     "by",     "can",     "could",   "did",     "do",     "does",
      "doing",   "down",    "during", "each",    "few",    "for",     "from",    "further", "had",    "has",
      "have",    "having",  "he",     "her",     "here",   "hers",    "him",     "his",     "how",    "i",
      "if",      "in",      "into",   "is",      "it",     "its",     "itself",  "may",     "me",     "more",
      "most",    "must",    "my",     "no",      "nor",    "not",     "of",      "off",     "on",     "once",
      "only",    "or",      "other",  "our",     "ours",   "out",     "over",    "own",     "same",   "she",
      "should",  "so",      "some",   "such",    "than",   "that",    "the",     "their",   "theirs", "them",
      "then",    "there",   "these",  "they",    "this",   "those",   "through", "to",      "too",    "under",
      "until",   "up",      "very",   "was",     "we",     "were",    "what",    "when",    "where",  "which",
      "while",   "who",     "whom",   "why",     "will",   "with",    "would",   "you",     "your",   "yours"};
  return kWords;
}

StopwordRegistry::StopwordRegistry() { curated_["en"] = bundled_english_stopwords(); }

void StopwordRegistry::load(const std::string& language, const std::filesystem::path& path) {
  StopwordSet words;
  const std::string text = read_file(path);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = trim(std::string_view(text).substr(pos, nl - pos));
    pos = nl + 1;
    if (line.empty() || line[0] == '#') continue;
    words.insert(to_lower(line));
  }
  curated_[language] = std::move(words);
}

const StopwordSet* StopwordRegistry::find(std::string_view language) const {
  auto it = curated_.find(language);
  return it == curated_.end() ? nullptr : &it->second;
}

StopwordSet frequency_stopwords(std::string_view text) {
  constexpr std::size_t kMinOccurrences = 5;
  std::map<std::string, std::size_t> counts;
  for (const auto& sentence : tokenize_text(text)) {
    for (const auto& t : sentence) {
      if (t.is_word) ++counts[t.term];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  const std::size_t take = (ranked.size() + 99) / 100;
  StopwordSet out;
  for (std::size_t i = 0; i < take && i < ranked.size(); ++i) {
    if (ranked[i].second >= kMinOccurrences) out.insert(ranked[i].first);
  }
  return out;
}

StopwordSet stopword_profile(std::string_view text, std::string_view language, const StopwordRegistry& registry) {
  if (const auto* curated = registry.find(language)) return *curated;
  return frequency_stopwords(text);
}

}  // namespace eca
