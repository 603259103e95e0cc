#pragma once

// Brute-force reference implementations. Each one is deliberately naive and
// shares no code with the library beyond plain data types.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "eca/corpus.hpp"
#include "eca/eval.hpp"
#include "eca/tagger.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// BIO: label index per position from span membership.

inline std::vector<std::size_t> bio_indices(const eca::Sentence& s) {
  std::vector<std::size_t> out(s.tokens.size(), 0);
  for (std::size_t pos = 0; pos < s.tokens.size(); ++pos) {
    for (const auto& sp : s.spans) {
      if (pos >= sp.start && pos < sp.end) {
        const auto t = static_cast<std::size_t>(sp.type);
        out[pos] = pos == sp.start ? 1 + 2 * t : 2 + 2 * t;
      }
    }
  }
  return out;
}

/// Spans implied by a possibly ill-formed label index sequence: an inside
/// label continues a span only when the previous position is of the same
/// type; otherwise it opens one. Index 13 (ignore) and 0 close spans.
inline std::vector<eca::ArgumentSpan> repaired_spans(const std::vector<std::size_t>& labels) {
  auto type_of = [](std::size_t l) -> std::optional<std::size_t> {
    if (l == 0 || l >= 13) return std::nullopt;
    return (l - 1) / 2;
  };
  std::vector<eca::ArgumentSpan> out;
  std::size_t i = 0;
  while (i < labels.size()) {
    const auto t = type_of(labels[i]);
    if (!t) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < labels.size() && labels[j] == 2 + 2 * *t) ++j;  // only I-t continues
    out.push_back({static_cast<eca::ArgumentType>(*t), i, j});
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Viterbi: exhaustive enumeration of every label path.

inline bool allowed(std::size_t prev, std::size_t cur) {
  if (cur == 0 || cur % 2 == 1) return true;  // O and B-k always allowed
  return prev == cur || prev == cur - 1;      // I-k after B-k or I-k
}

inline std::vector<std::size_t> best_path(const eca::ScoreMatrix& em, const eca::ScoreMatrix& tr) {
  const std::size_t n = em.rows, L = em.cols;
  std::vector<std::size_t> path(n, 0), best;
  double best_score = -INFINITY;
  if (n == 0) return {};
  for (;;) {
    bool ok = path[0] == 0 || path[0] % 2 == 1;
    double score = em(0, path[0]);
    for (std::size_t i = 1; ok && i < n; ++i) {
      ok = allowed(path[i - 1], path[i]) && std::isfinite(tr(path[i - 1], path[i]));
      score += tr(path[i - 1], path[i]) + em(i, path[i]);
    }
    // paths are visited in lexicographic order, so strict > keeps the smallest among ties
    if (ok && score > best_score) {
      best_score = score;
      best = path;
    }
    std::size_t k = n;
    while (k > 0 && ++path[k - 1] == L) path[--k] = 0;
    if (k == 0) break;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Exact-span scoring by tuple intersection.

struct Prf {
  double p = 0, r = 0, f = 0;
};

inline Prf prf(double gold, double pred, double correct) {
  Prf x;
  x.p = pred > 0 ? correct / pred : 0.0;
  x.r = gold > 0 ? correct / gold : 0.0;
  x.f = x.p + x.r > 0 ? 2 * x.p * x.r / (x.p + x.r) : 0.0;
  return x;
}

using Tuple = std::tuple<std::string, std::size_t, int, std::size_t, std::size_t>;

inline Tuple as_tuple(const eca::LocatedSpan& s) {
  return {s.doc_id, s.sentence, static_cast<int>(s.span.type), s.span.start, s.span.end};
}

inline std::map<int, Prf> exact_span(const std::vector<eca::LocatedSpan>& gold, const std::vector<eca::LocatedSpan>& pred,
                                     double* macro) {
  std::set<Tuple> g, p;
  for (const auto& s : gold) g.insert(as_tuple(s));
  for (const auto& s : pred) p.insert(as_tuple(s));
  std::map<int, Prf> out;
  double sum = 0;
  for (int t = 0; t < 6; ++t) {
    double ng = 0, np = 0, nc = 0;
    for (const auto& x : g) ng += std::get<2>(x) == t;
    for (const auto& x : p) {
      if (std::get<2>(x) != t) continue;
      np += 1;
      nc += g.contains(x);
    }
    out[t] = prf(ng, np, nc);
    sum += out[t].f;
  }
  if (macro) *macro = sum / 6.0;
  return out;
}

// ---------------------------------------------------------------------------
// Keyphrase scoring for ASCII text, computed term by term with full scans.

struct Tok {
  std::string surface;
  bool word;
};

inline std::vector<std::vector<Tok>> ascii_sentences(const std::string& text) {
  auto wordch = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  std::vector<std::vector<Tok>> out(1);
  for (std::size_t i = 0; i < text.size();) {
    const char c = text[i];
    if (wordch(c)) {
      std::size_t j = i;
      while (j < text.size() &&
             (wordch(text[j]) || ((text[j] == '-' || text[j] == '\'') && j + 1 < text.size() && wordch(text[j + 1]) &&
                                  j > i))) {
        ++j;
      }
      out.back().push_back({text.substr(i, j - i), true});
      i = j;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else {
      out.back().push_back({std::string(1, c), false});
      ++i;
      if (c == '.' || c == '!' || c == '?') out.emplace_back();
    }
  }
  std::vector<std::vector<Tok>> kept;
  for (auto& s : out) {
    if (std::any_of(s.begin(), s.end(), [](const Tok& t) { return t.word; })) kept.push_back(s);
  }
  return kept;
}

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::map<std::string, double> term_scores(const std::string& text, const std::set<std::string>& stop) {
  const auto sents = ascii_sentences(text);
  std::set<std::string> terms;
  for (const auto& s : sents)
    for (const auto& t : s)
      if (t.word) terms.insert(lower(t.surface));

  auto tf_of = [&](const std::string& term) {
    double n = 0;
    for (const auto& s : sents)
      for (const auto& t : s) n += t.word && lower(t.surface) == term;
    return n;
  };
  std::vector<double> pool;
  for (const auto& t : terms)
    if (!stop.contains(t)) pool.push_back(tf_of(t));
  if (pool.empty())
    for (const auto& t : terms) pool.push_back(tf_of(t));
  double mean = 0, sd = 0, mx = 0;
  for (double x : pool) mean += x / static_cast<double>(pool.size());
  for (double x : pool) sd += (x - mean) * (x - mean) / static_cast<double>(pool.size());
  sd = std::sqrt(sd);
  for (double x : pool) mx = std::max(mx, x);

  std::map<std::string, double> out;
  for (const auto& term : terms) {
    const double tf = tf_of(term);
    std::vector<double> where;
    std::set<std::size_t> in_sent;
    double casing = 0;
    std::set<std::string> left, right;
    double nl = 0, nr = 0;
    for (std::size_t si = 0; si < sents.size(); ++si) {
      const auto& s = sents[si];
      std::size_t first_word = s.size();
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i].word) {
          first_word = i;
          break;
        }
      }
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (!s[i].word || lower(s[i].surface) != term) continue;
        where.push_back(static_cast<double>(si));
        in_sent.insert(si);
        const std::string& w = s[i].surface;
        std::size_t letters = 0, upper = 0;
        for (char c : w) {
          if (std::isalpha(static_cast<unsigned char>(c))) {
            ++letters;
            upper += std::isupper(static_cast<unsigned char>(c)) != 0;
          }
        }
        const bool acronym = letters >= 2 && upper == letters;
        const bool capital = i != first_word && std::isupper(static_cast<unsigned char>(w[0]));
        casing += acronym || capital;
        if (i > 0 && s[i - 1].word) {
          left.insert(lower(s[i - 1].surface));
          ++nl;
        }
        if (i + 1 < s.size() && s[i + 1].word) {
          right.insert(lower(s[i + 1].surface));
          ++nr;
        }
      }
    }
    std::sort(where.begin(), where.end());
    const std::size_t n = where.size();
    const double median = n % 2 ? where[n / 2] : (where[n / 2 - 1] + where[n / 2]) / 2;
    const double dl = nl > 0 ? static_cast<double>(left.size()) / nl : 0.0;
    const double dr = nr > 0 ? static_cast<double>(right.size()) / nr : 0.0;
    const double max_tf = std::max(mx, tf);

    const double t_case = casing / (1 + std::log(tf));
    const double t_pos = std::log(std::log(3 + median));
    const double t_fnorm = tf / (mean + sd);
    const double t_rel = 1 + (dl + dr) * tf / max_tf;
    const double t_sent = static_cast<double>(in_sent.size()) / static_cast<double>(sents.size());
    out[term] = t_rel * t_pos / (t_case + t_fnorm / t_rel + t_sent / t_rel);
  }
  return out;
}

/// Every candidate n-gram (punctuation-free, no stopword at either end) with
/// its score.
inline std::map<std::string, double> candidate_scores(const std::string& text, const std::set<std::string>& stop,
                                                      std::size_t max_ngram = 3) {
  const auto S = term_scores(text, stop);
  std::map<std::string, std::pair<std::vector<std::string>, double>> cands;
  for (const auto& s : ascii_sentences(text)) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t len = 1; len <= max_ngram && i + len <= s.size(); ++len) {
        std::vector<std::string> terms;
        bool ok = true;
        for (std::size_t k = i; k < i + len; ++k) {
          ok = ok && s[k].word;
          terms.push_back(lower(s[k].surface));
        }
        if (!ok || stop.contains(terms.front()) || stop.contains(terms.back())) continue;
        std::string key;
        for (const auto& t : terms) key += (key.empty() ? "" : " ") + t;
        cands[key].first = terms;
        cands[key].second += 1;
      }
    }
  }
  std::map<std::string, double> out;
  for (const auto& [key, c] : cands) {
    double prod = 1, sum = 0;
    for (const auto& t : c.first) {
      prod *= S.at(t);
      sum += S.at(t);
    }
    out[key] = prod / (c.second * (1 + sum));
  }
  return out;
}

}  // namespace oracle
