#include "eca/tagger.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "eca/error.hpp"
#include "eca/util.hpp"

namespace eca {

AugmentedInstance augment_instance(const ContextInstance& instance, std::string_view feature_text) {
  const auto feature = simple_tokenize(feature_text);
  AugmentedInstance aug;
  auto push_augment = [&](const std::string& tok) {
    aug.tokens.push_back(tok);
    aug.mask.push_back(TokenRole::Augment);
    aug.back_map.emplace_back(std::nullopt);
  };
  for (const auto& t : feature) push_augment(t);
  push_augment(std::string(kAugmentSeparator));
  for (std::size_t i = 0; i < instance.tokens.size(); ++i) {
    aug.tokens.push_back(instance.tokens[i]);
    aug.mask.push_back(TokenRole::Body);
    aug.back_map.push_back(instance.back_map[i]);
  }
  push_augment(std::string(kAugmentSeparator));
  for (const auto& t : feature) push_augment(t);
  aug.sentences = instance.sentences;
  return aug;
}

ContextInstance strip_augmentation(const AugmentedInstance& aug) {
  ContextInstance out;
  for (std::size_t i = 0; i < aug.tokens.size(); ++i) {
    if (aug.mask[i] != TokenRole::Body) continue;
    out.tokens.push_back(aug.tokens[i]);
    out.back_map.push_back(aug.back_map[i]);
  }
  out.sentences = aug.sentences;
  return out;
}

std::string_view to_string(TaggerVariant v) {
  switch (v) {
    case TaggerVariant::WithoutEvent: return "without-event";
    case TaggerVariant::EventAugmentation: return "ea";
    case TaggerVariant::CausalAugmentation: return "eca";
  }
  return "eca";
}

TaggerVariant parse_variant(std::string_view name) {
  if (name == "without-event") return TaggerVariant::WithoutEvent;
  if (name == "ea") return TaggerVariant::EventAugmentation;
  if (name == "eca") return TaggerVariant::CausalAugmentation;
  throw ConfigError("unknown tagger variant '" + std::string(name) + "' (expected without-event|ea|eca)");
}

// ---------------------------------------------------------------------------
// Features

std::vector<std::uint8_t> phrase_overlap(std::span<const std::string> tokens, std::span<const std::string> phrases) {
  std::vector<std::vector<std::string>> pats;
  for (const auto& p : phrases) {
    auto toks = simple_tokenize(to_lower(p));
    if (!toks.empty()) pats.push_back(std::move(toks));
  }
  std::stable_sort(pats.begin(), pats.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::vector<std::string> lower;
  lower.reserve(tokens.size());
  for (const auto& t : tokens) lower.push_back(to_lower(t));

  std::vector<std::uint8_t> out(tokens.size(), 0);
  std::size_t i = 0;
  while (i < lower.size()) {
    std::size_t matched = 0;
    for (const auto& pat : pats) {
      if (i + pat.size() <= lower.size() && std::equal(pat.begin(), pat.end(), lower.begin() + static_cast<std::ptrdiff_t>(i))) {
        matched = pat.size();
        break;
      }
    }
    if (matched == 0) {
      ++i;
      continue;
    }
    out[i] = 1;
    for (std::size_t k = 1; k < matched; ++k) out[i + k] = 2;
    i += matched;
  }
  return out;
}

namespace {

std::string shape_of(std::string_view token) {
  const std::u32string cps = utf8_decode(token);
  bool any_word = false, any_digit = false, any_alpha = false;
  for (char32_t c : cps) {
    if (is_word_codepoint(c)) {
      any_word = true;
      if (c >= '0' && c <= '9') any_digit = true;
      else any_alpha = true;
    }
  }
  if (!any_word) return "punct";
  if (any_digit && !any_alpha) return "digit";
  if (!cps.empty() && is_upper_codepoint(cps.front())) return "cased";
  return "other";
}

bool has_alnum(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || (c & 0x80); });
}

std::vector<std::string> event_terms(const CausalGraph& graph, std::string_view event_type) {
  std::vector<std::string> terms = {std::string(event_type)};
  if (graph.contains(event_type)) {
    const auto& r = graph.event(event_type).resource;
    terms.push_back(r.event_type);
    terms.insert(terms.end(), r.query_terms.begin(), r.query_terms.end());
    terms.insert(terms.end(), r.merged_with.begin(), r.merged_with.end());
  }
  return terms;
}

}  // namespace

std::vector<std::vector<std::string>> featurize(const AugmentedInstance& aug, std::string_view event_type,
                                                const CausalGraph& graph, TaggerVariant variant) {
  const std::size_t n = aug.tokens.size();
  std::vector<std::vector<std::string>> out(n);
  std::vector<std::string> lower(n);
  for (std::size_t i = 0; i < n; ++i) lower[i] = to_lower(aug.tokens[i]);

  // body region and per-sentence layout
  std::vector<std::size_t> body;
  for (std::size_t i = 0; i < n; ++i) {
    if (aug.mask[i] == TokenRole::Body) body.push_back(i);
  }
  std::map<std::size_t, std::size_t> sentence_rank;  // document sentence -> index in instance
  for (std::size_t k = 0; k < aug.sentences.size(); ++k) sentence_rank[aug.sentences[k]] = k;

  // tokens repeated in a different sentence of the same context
  std::map<std::string, std::set<std::size_t>> token_sentences;
  for (std::size_t i : body) {
    if (aug.back_map[i] && has_alnum(lower[i])) token_sentences[lower[i]].insert(aug.back_map[i]->sentence);
  }

  const bool event_features = variant != TaggerVariant::WithoutEvent;
  const bool causal_features = variant == TaggerVariant::CausalAugmentation;
  const std::string ev = "ev=" + std::string(event_type);

  // sentences mentioning the event type or one of its query terms
  std::set<std::size_t> cue_sentences;
  std::vector<std::uint8_t> reason_flags, effect_flags;
  if (event_features) {
    std::map<std::size_t, std::vector<std::string>> by_sentence;
    for (std::size_t i : body) {
      if (aug.back_map[i]) by_sentence[aug.back_map[i]->sentence].push_back(aug.tokens[i]);
    }
    const auto terms = event_terms(graph, event_type);
    for (const auto& [s, toks] : by_sentence) {
      auto hits = phrase_overlap(toks, terms);
      if (std::any_of(hits.begin(), hits.end(), [](std::uint8_t h) { return h != 0; })) cue_sentences.insert(s);
    }
  }
  if (causal_features && graph.contains(event_type)) {
    std::vector<std::string> body_tokens;
    for (std::size_t i : body) body_tokens.push_back(aug.tokens[i]);
    const auto& node = graph.event(event_type);
    reason_flags = phrase_overlap(body_tokens, node.reason.phrases);
    effect_flags = phrase_overlap(body_tokens, node.after_effect.phrases);
  }

  auto window = [&](std::size_t i, int offset) -> std::string {
    const auto j = static_cast<std::ptrdiff_t>(i) + offset;
    if (j < 0) return "<s>";
    if (j >= static_cast<std::ptrdiff_t>(n)) return "</s>";
    return lower[static_cast<std::size_t>(j)];
  };

  for (std::size_t b = 0; b < body.size(); ++b) {
    const std::size_t i = body[b];
    if (!aug.back_map[i]) continue;  // <sb>
    const TokenRef ref = *aug.back_map[i];
    auto& f = out[i];
    const std::string& w = lower[i];
    const std::string shape = shape_of(aug.tokens[i]);
    const std::u32string cps = utf8_decode(w);
    f.push_back("bias");
    f.push_back("w=" + w);
    for (std::size_t k = 1; k <= 3 && k <= cps.size(); ++k) {
      f.push_back("p" + std::to_string(k) + "=" + utf8_encode(cps.substr(0, k)));
      f.push_back("s" + std::to_string(k) + "=" + utf8_encode(cps.substr(cps.size() - k)));
    }
    f.push_back("shape=" + shape);
    const std::string prev = window(i, -1);
    const std::string next = window(i, 1);
    f.push_back("w-1=" + prev);
    f.push_back("w-2=" + window(i, -2));
    f.push_back("w+1=" + next);
    f.push_back("w+2=" + window(i, 2));
    f.push_back("w-1|w=" + prev + "|" + w);
    f.push_back("w|w+1=" + w + "|" + next);
    const std::size_t rank = sentence_rank.count(ref.sentence) ? sentence_rank[ref.sentence] : 0;
    f.push_back("sb=" + std::to_string(std::min<std::size_t>(rank, 3)));
    if (auto it = token_sentences.find(w); it != token_sentences.end() && it->second.size() > 1) {
      f.push_back("rep");
      f.push_back("rep|shape=" + shape);
    }
    if (event_features) {
      f.push_back(ev);
      f.push_back(ev + "|w=" + w);
      f.push_back(ev + "|w-1=" + prev);
      f.push_back(ev + "|shape=" + shape);
      if (cue_sentences.count(ref.sentence)) {
        f.push_back("cue");
        f.push_back("cue|shape=" + shape);
        f.push_back("cue|w-1=" + prev);
      }
    }
    if (!reason_flags.empty()) {
      if (reason_flags[b]) {
        const std::string tag = reason_flags[b] == 1 ? "IN-REASON-PHRASE:B" : "IN-REASON-PHRASE:I";
        f.push_back("IN-REASON-PHRASE");
        f.push_back(tag);
        f.push_back(tag + "|w-1=" + prev);
      }
      if (effect_flags[b]) {
        const std::string tag = effect_flags[b] == 1 ? "IN-EFFECT-PHRASE:B" : "IN-EFFECT-PHRASE:I";
        f.push_back("IN-EFFECT-PHRASE");
        f.push_back(tag);
        f.push_back(tag + "|w-1=" + prev);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decoding

ScoreMatrix constrained_transitions(const ScoreMatrix& learned) {
  constexpr std::size_t L = Label::kNumContent;
  ScoreMatrix t(L, L, 0.0);
  if (learned.rows == L && learned.cols == L) t = learned;
  for (std::size_t from = 0; from < L; ++from) {
    const Label a = Label::from_index(from);
    for (std::size_t to = 0; to < L; ++to) {
      const Label b = Label::from_index(to);
      if (b.is_inside() && !((a.is_begin() || a.is_inside()) && a.type() == b.type())) t(from, to) = kForbidden;
    }
  }
  return t;
}

LabelSeq viterbi_decode(const ScoreMatrix& emissions, const ScoreMatrix& transitions) {
  const std::size_t n = emissions.rows;
  const std::size_t L = emissions.cols;
  if (n == 0) return {};
  // best[t][y]: best score of positions t..n-1 given label y at t
  ScoreMatrix best(n, L, kForbidden);
  for (std::size_t y = 0; y < L; ++y) best(n - 1, y) = emissions(n - 1, y);
  for (std::size_t t = n - 1; t-- > 0;) {
    for (std::size_t y = 0; y < L; ++y) {
      double m = kForbidden;
      for (std::size_t z = 0; z < L; ++z) m = std::max(m, transitions(y, z) + best(t + 1, z));
      best(t, y) = emissions(t, y) + m;
    }
  }
  // forward pass picks the smallest label reaching the optimum at each step
  LabelSeq path(n);
  std::size_t chosen = 0;
  double target = kForbidden;
  for (std::size_t y = 0; y < L; ++y) {
    if (Label::from_index(y).is_inside()) continue;
    if (best(0, y) > target) {
      target = best(0, y);
      chosen = y;
    }
  }
  path[0] = Label::from_index(chosen);
  for (std::size_t t = 1; t < n; ++t) {
    const std::size_t prev = chosen;
    double m = kForbidden;
    for (std::size_t z = 0; z < L; ++z) {
      const double v = transitions(prev, z) + best(t, z);
      if (v > m) {
        m = v;
        chosen = z;
      }
    }
    path[t] = Label::from_index(chosen);
  }
  return path;
}

// ---------------------------------------------------------------------------
// Model

std::optional<std::uint32_t> TaggerModel::feature_id(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t TaggerModel::intern(const std::string& name) {
  auto [it, inserted] = index_.try_emplace(name, static_cast<std::uint32_t>(names_.size()));
  if (inserted) {
    names_.push_back(name);
    emissions_.resize(emissions_.size() + kLabels, 0.0);
  }
  return it->second;
}

ScoreMatrix TaggerModel::emissions(const std::vector<std::vector<std::string>>& features,
                                   const std::vector<bool>& clamped) const {
  ScoreMatrix e(features.size(), kLabels, 0.0);
  for (std::size_t t = 0; t < features.size(); ++t) {
    if (clamped[t]) {
      for (std::size_t l = 1; l < kLabels; ++l) e(t, l) = kForbidden;
      continue;
    }
    for (const auto& name : features[t]) {
      auto it = index_.find(name);
      if (it == index_.end()) continue;
      const double* w = &emissions_[it->second * kLabels];
      for (std::size_t l = 0; l < kLabels; ++l) e(t, l) += w[l];
    }
  }
  return e;
}

bool TaggerModel::operator==(const TaggerModel& o) const {
  if (transitions_.data != o.transitions_.data) return false;
  if (hyper_.epochs != o.hyper_.epochs || hyper_.seed != o.hyper_.seed || hyper_.scope != o.hyper_.scope ||
      hyper_.variant != o.hyper_.variant || hyper_.feature_template != o.hyper_.feature_template ||
      hyper_.paragraph_len != o.hyper_.paragraph_len || hyper_.token_budget != o.hyper_.token_budget) {
    return false;
  }
  // an all-zero feature is equivalent to an absent one
  auto covered = [](const TaggerModel& a, const TaggerModel& b) {
    for (std::size_t f = 0; f < a.names_.size(); ++f) {
      auto id = b.feature_id(a.names_[f]);
      for (std::size_t l = 0; l < kLabels; ++l) {
        const double other = id ? b.weight(*id, l) : 0.0;
        if (a.weight(static_cast<std::uint32_t>(f), l) != other) return false;
      }
    }
    return true;
  };
  return covered(*this, o) && covered(o, *this);
}

// ---------------------------------------------------------------------------
// Training

std::string feature_text_for(const CausalGraph& graph, std::string_view event_type, const TaggerHyper& hyper) {
  switch (hyper.variant) {
    case TaggerVariant::WithoutEvent: return "";
    case TaggerVariant::EventAugmentation: return std::string(event_type);
    case TaggerVariant::CausalAugmentation:
      try {
        return render_causal_feature(graph, event_type, hyper.feature_template).text;
      } catch (const DataError& e) {
        spdlog::warn("no causal feature for '{}': {}; using empty feature text", event_type, e.what());
        return "";
      }
  }
  return "";
}

std::vector<ContextInstance> budgeted_instances(const Document& doc, const TaggerHyper& hyper,
                                                std::size_t feature_tokens) {
  auto instances = make_context_instances(doc, hyper.scope, hyper.paragraph_len);
  const std::size_t overhead = 2 * feature_tokens + 2;
  const std::size_t body_budget = hyper.token_budget > overhead ? hyper.token_budget - overhead : 0;
  std::vector<ContextInstance> out;
  for (auto& inst : instances) {
    if (inst.tokens.size() <= body_budget || inst.sentences.size() == 1) {
      out.push_back(std::move(inst));
      continue;
    }
    // greedy maximal chunks at sentence boundaries
    std::vector<std::size_t> chunk;
    std::size_t length = 0;
    for (std::size_t s : inst.sentences) {
      const std::size_t add = doc.sentences[s].tokens.size() + (chunk.empty() ? 0 : 1);
      if (!chunk.empty() && length + add > body_budget) {
        out.push_back(make_instance(doc, chunk));
        chunk.clear();
        length = 0;
      }
      length += doc.sentences[s].tokens.size() + (chunk.empty() ? 0 : 1);
      chunk.push_back(s);
    }
    if (!chunk.empty()) out.push_back(make_instance(doc, chunk));
  }
  return out;
}

namespace {

struct TrainInstance {
  std::string key;
  std::vector<std::vector<std::uint32_t>> features;
  LabelSeq gold;               // augment positions hold O
  std::vector<bool> clamped;   // augment and <sb>
  std::vector<bool> ignored;   // augment positions: excluded from updates
};

}  // namespace

TaggerModel train_tagger(std::span<const Document* const> docs, const CausalGraph& graph, const EventLabels& events,
                         const TaggerHyper& hyper) {
  constexpr std::size_t L = TaggerModel::kLabels;
  TaggerModel model(hyper);

  std::vector<const Document*> sorted(docs.begin(), docs.end());
  std::sort(sorted.begin(), sorted.end(), [](const Document* a, const Document* b) { return a->doc_id < b->doc_id; });

  std::vector<TrainInstance> data;
  std::vector<std::string> missing;
  for (const Document* doc : sorted) {
    auto ev = events.find(doc->doc_id);
    if (ev == events.end()) {
      missing.push_back(doc->doc_id);
      continue;
    }
    const std::string text = feature_text_for(graph, ev->second, hyper);
    const std::size_t feature_tokens = simple_tokenize(text).size();
    std::size_t k = 0;
    for (const auto& inst : budgeted_instances(*doc, hyper, feature_tokens)) {
      const AugmentedInstance aug = augment_instance(inst, text);
      const auto feats = featurize(aug, ev->second, graph, hyper.variant);
      const LabelSeq body_gold = instance_labels(*doc, inst);
      TrainInstance ti;
      ti.key = doc->doc_id + "#" + std::to_string(k++);
      ti.features.resize(aug.tokens.size());
      ti.gold.assign(aug.tokens.size(), Label::outside());
      ti.clamped.assign(aug.tokens.size(), true);
      ti.ignored.assign(aug.tokens.size(), true);
      std::size_t b = 0;
      for (std::size_t i = 0; i < aug.tokens.size(); ++i) {
        if (aug.mask[i] != TokenRole::Body) continue;
        ti.ignored[i] = false;
        ti.gold[i] = body_gold[b++];
        if (!aug.back_map[i]) continue;
        ti.clamped[i] = false;
        for (const auto& name : feats[i]) ti.features[i].push_back(model.intern(name));
      }
      data.push_back(std::move(ti));
    }
  }
  if (!missing.empty()) throw DataError("documents without an event label: " + join(missing, ", "));

  std::vector<double>& w = model.emission_weights();
  std::vector<double> u(w.size(), 0.0);
  ScoreMatrix& tw = model.transitions();
  ScoreMatrix tu(L, L, 0.0);
  double c = 1.0;

  Rng rng(hyper.seed);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t idx : order) {
      const TrainInstance& ti = data[idx];
      const std::size_t n = ti.gold.size();
      ScoreMatrix e(n, L, 0.0);
      for (std::size_t t = 0; t < n; ++t) {
        if (ti.clamped[t]) {
          for (std::size_t l = 1; l < L; ++l) e(t, l) = kForbidden;
          continue;
        }
        for (std::uint32_t f : ti.features[t]) {
          const double* wf = &w[f * L];
          for (std::size_t l = 0; l < L; ++l) e(t, l) += wf[l];
        }
      }
      const LabelSeq pred = viterbi_decode(e, constrained_transitions(tw));
      if (pred != ti.gold) {
        for (std::size_t t = 0; t < n; ++t) {
          if (ti.ignored[t] || pred[t] == ti.gold[t]) continue;
          const std::size_t g = ti.gold[t].index();
          const std::size_t p = pred[t].index();
          for (std::uint32_t f : ti.features[t]) {
            w[f * L + g] += 1.0;
            w[f * L + p] -= 1.0;
            u[f * L + g] += c;
            u[f * L + p] -= c;
          }
        }
        for (std::size_t t = 1; t < n; ++t) {
          const std::size_t g0 = ti.gold[t - 1].index(), g1 = ti.gold[t].index();
          const std::size_t p0 = pred[t - 1].index(), p1 = pred[t].index();
          if (g0 == p0 && g1 == p1) continue;
          tw(g0, g1) += 1.0;
          tw(p0, p1) -= 1.0;
          tu(g0, g1) += c;
          tu(p0, p1) -= c;
        }
      }
      c += 1.0;
    }
  }
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= u[i] / c;
  for (std::size_t i = 0; i < tw.data.size(); ++i) tw.data[i] -= tu.data[i] / c;
  return model;
}

// ---------------------------------------------------------------------------
// Prediction

std::vector<PredictedSpan> predict_args(const TaggerModel& model, const Document& doc, std::string_view event_type,
                                        const CausalGraph& graph) {
  const TaggerHyper& hyper = model.hyper();
  const std::string text = feature_text_for(graph, event_type, hyper);
  const std::size_t feature_tokens = simple_tokenize(text).size();
  const ScoreMatrix transitions = constrained_transitions(model.transitions());
  std::vector<PredictedSpan> out;
  for (const auto& inst : budgeted_instances(doc, hyper, feature_tokens)) {
    const AugmentedInstance aug = augment_instance(inst, text);
    const auto feats = featurize(aug, event_type, graph, hyper.variant);
    std::vector<bool> clamped(aug.tokens.size());
    for (std::size_t i = 0; i < aug.tokens.size(); ++i) clamped[i] = aug.mask[i] != TokenRole::Body || !aug.back_map[i];
    const LabelSeq labels = viterbi_decode(model.emissions(feats, clamped), transitions);

    // strip augment positions, then decode in instance coordinates
    LabelSeq body;
    std::vector<std::optional<TokenRef>> refs;
    for (std::size_t i = 0; i < aug.tokens.size(); ++i) {
      if (aug.mask[i] != TokenRole::Body) continue;
      body.push_back(labels[i]);
      refs.push_back(aug.back_map[i]);
    }
    for (const auto& sp : decode_bio(body)) {
      const auto& first = refs[sp.start];
      const auto& last = refs[sp.end - 1];
      if (!first || !last || first->sentence != last->sentence) continue;  // never crosses <sb>: clamped to O
      out.push_back({first->sentence, {sp.type, first->token, last->token + 1}});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize_tagger(const TaggerModel& model) {
  constexpr std::size_t L = TaggerModel::kLabels;
  const TaggerHyper& h = model.hyper();
  nlohmann::json j;
  j["backend"] = "averaged_structured_perceptron";
  std::vector<std::string> labels;
  for (std::size_t l = 0; l < L; ++l) labels.push_back(Label::from_index(l).name());
  j["labels"] = labels;
  j["config"] = {{"epochs", h.epochs},
                 {"seed", h.seed},
                 {"scope", std::string(to_string(h.scope))},
                 {"paragraph_len", h.paragraph_len},
                 {"token_budget", h.token_budget},
                 {"variant", std::string(to_string(h.variant))},
                 {"template", h.feature_template},
                 {"neural_defaults",
                  {{"encoder", h.neural.encoder},
                   {"batch_size", h.neural.batch_size},
                   {"max_seq_len", h.neural.max_seq_len},
                   {"epochs", h.neural.epochs},
                   {"optimizer", h.neural.optimizer}}}};
  auto trans = nlohmann::json::array();
  for (std::size_t a = 0; a < L; ++a) {
    std::vector<double> row(L);
    for (std::size_t b = 0; b < L; ++b) row[b] = model.transitions()(a, b);
    trans.push_back(row);
  }
  j["transitions"] = std::move(trans);
  std::map<std::string, std::uint32_t> sorted;
  for (std::uint32_t f = 0; f < model.num_features(); ++f) sorted.emplace(model.feature_name(f), f);
  nlohmann::json emissions = nlohmann::json::object();
  for (const auto& [name, f] : sorted) {
    nlohmann::json sparse = nlohmann::json::object();
    for (std::size_t l = 0; l < L; ++l) {
      if (model.weight(f, l) != 0.0) sparse[labels[l]] = model.weight(f, l);
    }
    if (!sparse.empty()) emissions[name] = std::move(sparse);
  }
  j["emissions"] = std::move(emissions);
  return j.dump() + "\n";
}

TaggerModel parse_tagger(std::string_view text) {
  constexpr std::size_t L = TaggerModel::kLabels;
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& c = j.at("config");
    TaggerHyper h;
    h.epochs = c.at("epochs").get<std::size_t>();
    h.seed = c.at("seed").get<std::uint64_t>();
    h.scope = parse_scope(c.at("scope").get<std::string>());
    h.paragraph_len = c.at("paragraph_len").get<std::size_t>();
    h.token_budget = c.at("token_budget").get<std::size_t>();
    h.variant = parse_variant(c.at("variant").get<std::string>());
    h.feature_template = c.at("template").get<std::string>();
    if (auto it = c.find("neural_defaults"); it != c.end()) {
      h.neural.encoder = it->value("encoder", h.neural.encoder);
      h.neural.batch_size = it->value("batch_size", h.neural.batch_size);
      h.neural.max_seq_len = it->value("max_seq_len", h.neural.max_seq_len);
      h.neural.epochs = it->value("epochs", h.neural.epochs);
      h.neural.optimizer = it->value("optimizer", h.neural.optimizer);
    }
    TaggerModel model(h);
    const auto& trans = j.at("transitions");
    if (trans.size() != L) throw DataError("tagger model: transition table must be 13x13");
    for (std::size_t a = 0; a < L; ++a) {
      for (std::size_t b = 0; b < L; ++b) model.transitions()(a, b) = trans.at(a).at(b).get<double>();
    }
    for (const auto& [name, sparse] : j.at("emissions").items()) {
      const std::uint32_t f = model.intern(name);
      for (const auto& [label, value] : sparse.items()) {
        model.emission_weights()[f * L + Label::parse(label).index()] = value.get<double>();
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("tagger model: ") + e.what());
  }
}

}  // namespace eca
