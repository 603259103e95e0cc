#include "eca/eval.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <cstdio>
#include <set>

#include "eca/error.hpp"

namespace eca {

std::string_view to_string(MatchMode mode) { return mode == MatchMode::ExactSpan ? "exact_span" : "token_level"; }

MatchMode parse_match_mode(std::string_view name) {
  if (name == "exact_span") return MatchMode::ExactSpan;
  if (name == "token_level") return MatchMode::TokenLevel;
  throw ConfigError("unknown eval mode '" + std::string(name) + "' (expected exact_span|token_level)");
}

TypeScore score_counts(std::size_t gold, std::size_t pred, std::size_t correct) {
  TypeScore s;
  s.gold = gold;
  s.pred = pred;
  s.correct = correct;
  s.precision = pred ? static_cast<double>(correct) / static_cast<double>(pred) : 0.0;
  s.recall = gold ? static_cast<double>(correct) / static_cast<double>(gold) : 0.0;
  s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

namespace {

EvalReport finish(const std::map<ArgumentType, std::array<std::size_t, 3>>& counts, MatchMode mode) {
  EvalReport r;
  r.mode = mode;
  double sum = 0;
  for (ArgumentType t : kArgumentTypes) {
    auto it = counts.find(t);
    const auto c = it == counts.end() ? std::array<std::size_t, 3>{0, 0, 0} : it->second;
    r.per_type[t] = score_counts(c[0], c[1], c[2]);
    sum += r.per_type[t].f1;
  }
  r.macro_avg_f1 = sum / static_cast<double>(kArgumentTypes.size());
  return r;
}

}  // namespace

EvalReport span_prf(std::span<const LocatedSpan> gold, std::span<const LocatedSpan> pred, MatchMode mode) {
  std::map<ArgumentType, std::array<std::size_t, 3>> counts;  // gold, pred, correct
  if (mode == MatchMode::ExactSpan) {
    const std::set<LocatedSpan> g(gold.begin(), gold.end());
    const std::set<LocatedSpan> p(pred.begin(), pred.end());
    for (const auto& s : g) ++counts[s.span.type][0];
    for (const auto& s : p) {
      ++counts[s.span.type][1];
      if (g.contains(s)) ++counts[s.span.type][2];
    }
    return finish(counts, mode);
  }
  using Pos = std::tuple<std::string, std::size_t, std::size_t>;
  auto expand = [](std::span<const LocatedSpan> spans) {
    std::map<Pos, ArgumentType> out;
    for (const auto& s : spans) {
      for (std::size_t t = s.span.start; t < s.span.end; ++t) out.emplace(Pos{s.doc_id, s.sentence, t}, s.span.type);
    }
    return out;
  };
  const auto g = expand(gold);
  const auto p = expand(pred);
  for (const auto& [pos, type] : g) ++counts[type][0];
  for (const auto& [pos, type] : p) {
    ++counts[type][1];
    if (auto it = g.find(pos); it != g.end() && it->second == type) ++counts[type][2];
  }
  return finish(counts, mode);
}

double pooled_f1(const EvalReport& report, std::span<const ArgumentType> types) {
  std::size_t g = 0, p = 0, c = 0;
  for (ArgumentType t : types) {
    const auto& s = report.per_type.at(t);
    g += s.gold;
    p += s.pred;
    c += s.correct;
  }
  return score_counts(g, p, c).f1;
}

double micro_f1(std::span<const std::string> gold, std::span<const std::string> pred) {
  if (gold.size() != pred.size()) {
    throw DataError("micro_f1: " + std::to_string(gold.size()) + " gold labels vs " + std::to_string(pred.size()) +
                    " predictions");
  }
  if (gold.empty()) return 0.0;
  // every item receives exactly one predicted and one gold label, so pooled
  // TP = correct, FP = FN = wrong
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) correct += gold[i] == pred[i];
  return score_counts(gold.size(), pred.size(), correct).f1;
}

std::vector<LocatedSpan> gold_spans(std::span<const Document* const> docs) {
  std::vector<LocatedSpan> out;
  for (const Document* d : docs) {
    for (std::size_t s = 0; s < d->sentences.size(); ++s) {
      for (const auto& sp : d->sentences[s].spans) out.push_back({d->doc_id, s, sp});
    }
  }
  return out;
}

std::vector<LocatedSpan> located(const std::string& doc_id, std::span<const PredictedSpan> spans) {
  std::vector<LocatedSpan> out;
  out.reserve(spans.size());
  for (const auto& p : spans) out.push_back({doc_id, p.sentence, p.span});
  return out;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json j;
  j["mode"] = std::string(to_string(report.mode));
  j["macro_avg_f1"] = report.macro_avg_f1;
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [type, s] : report.per_type) {
    per[std::string(to_string(type))] = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
                                         {"gold", s.gold},           {"pred", s.pred},     {"correct", s.correct}};
  }
  j["per_type"] = std::move(per);
  return j;
}

std::string format_table(const std::vector<std::pair<std::string, EvalReport>>& rows) {
  std::size_t name_width = 6;
  for (const auto& [name, _] : rows) name_width = std::max(name_width, name.size());
  std::string out;
  char buf[64];
  auto cell = [&](const std::string& s, std::size_t width, bool left) {
    std::snprintf(buf, sizeof buf, left ? "%-*s" : "%*s", static_cast<int>(width), s.c_str());
    out += buf;
  };
  cell("System", name_width, true);
  for (ArgumentType t : kArgumentTypes) cell(" " + std::string(to_string(t)), 13, false);
  cell(" Avg.", 8, false);
  out += '\n';
  for (const auto& [name, report] : rows) {
    cell(name, name_width, true);
    for (ArgumentType t : kArgumentTypes) {
      std::snprintf(buf, sizeof buf, "%13.2f", 100.0 * report.per_type.at(t).f1);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "%8.2f", 100.0 * report.macro_avg_f1);
    out += buf;
    out += '\n';
  }
  return out;
}

}  // namespace eca
