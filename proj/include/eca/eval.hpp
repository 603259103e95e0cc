#pragma once

// Span-level scoring and event-label micro F1.

#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eca/corpus.hpp"
#include "eca/tagger.hpp"

namespace eca {

enum class MatchMode : std::uint8_t { ExactSpan, TokenLevel };

std::string_view to_string(MatchMode mode);
MatchMode parse_match_mode(std::string_view name);

struct TypeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t gold = 0;
  std::size_t pred = 0;
  std::size_t correct = 0;
};

/// P, R and F1 from counts, with 0/0 := 0.
TypeScore score_counts(std::size_t gold, std::size_t pred, std::size_t correct);

struct EvalReport {
  std::map<ArgumentType, TypeScore> per_type;  // all six types present
  double macro_avg_f1 = 0.0;                   // unweighted over the six types
  MatchMode mode = MatchMode::ExactSpan;
};

/// A span located in a corpus.
struct LocatedSpan {
  std::string doc_id;
  std::size_t sentence = 0;
  ArgumentSpan span;

  auto operator<=>(const LocatedSpan&) const = default;
};

/// Inputs are treated as sets. exact_span: a prediction is correct iff
/// document, sentence, type and both boundaries match. token_level: per-token
/// multiclass counts over span-covered positions.
EvalReport span_prf(std::span<const LocatedSpan> gold, std::span<const LocatedSpan> pred, MatchMode mode);

/// F1 over the union of several types' counts.
double pooled_f1(const EvalReport& report, std::span<const ArgumentType> types);

/// Micro-averaged F1 over single-label decisions (equals accuracy). Throws
/// DataError on a length mismatch.
double micro_f1(std::span<const std::string> gold, std::span<const std::string> pred);

std::vector<LocatedSpan> gold_spans(std::span<const Document* const> docs);
std::vector<LocatedSpan> located(const std::string& doc_id, std::span<const PredictedSpan> spans);

nlohmann::json to_json(const EvalReport& report);

/// Rows are systems, columns the six argument types then "Avg." (F1 x 100).
std::string format_table(const std::vector<std::pair<std::string, EvalReport>>& rows);

}  // namespace eca
