#include "eca/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "eca/error.hpp"
#include "eca/event_cls.hpp"
#include "eca/util.hpp"

namespace eca {

namespace {

constexpr std::array<ArgumentType, 2> kCausalTypes = {ArgumentType::Reason, ArgumentType::AfterEffect};

struct NamedReport {
  std::string system;
  EvalReport report;
};

struct SeedOutcome {
  std::vector<NamedReport> reports;
  std::optional<double> event_f1;
};

struct Data {
  Corpus corpus;
  CausalGraph graph;
};

Data load_data(const ExperimentConfig& config, std::uint64_t seed) {
  if (config.synthetic) {
    auto syn = generate_synthetic_corpus(seed, *config.synthetic);
    return {std::move(syn.corpus), std::move(syn.graph)};
  }
  return {load_corpus(config.corpus_path), load_graph(config.graph_path)};
}

EventLabels gold_events(std::span<const Document* const> docs) {
  EventLabels out;
  for (const Document* d : docs) {
    if (auto label = derive_doc_event_label(*d)) out.emplace(d->doc_id, *label);
  }
  return out;
}

TaggerHyper tagger_hyper(const ExperimentConfig& config, std::uint64_t seed, Scope scope, TaggerVariant variant) {
  TaggerHyper h;
  h.epochs = config.epochs;
  h.seed = seed;
  h.scope = scope;
  h.paragraph_len = config.paragraph_len;
  h.token_budget = config.token_budget;
  h.variant = variant;
  return h;
}

EvalReport evaluate_tagger(const TaggerModel& model, std::span<const Document* const> docs, const CausalGraph& graph,
                           const EventLabels& events, MatchMode mode) {
  std::vector<LocatedSpan> pred;
  for (const Document* d : docs) {
    auto it = events.find(d->doc_id);
    if (it == events.end()) throw DataError("no event label for document " + d->doc_id);
    const auto spans = predict_args(model, *d, it->second, graph);
    auto loc = located(d->doc_id, spans);
    pred.insert(pred.end(), loc.begin(), loc.end());
  }
  const auto gold = gold_spans(docs);
  return span_prf(gold, pred, mode);
}

/// Replaces exactly round(rate * n) labels with a different label, chosen by
/// a seeded shuffle of the documents.
EventLabels corrupt(EventLabels events, const std::vector<std::string>& label_set, double rate, std::uint64_t seed) {
  if (label_set.size() < 2) return events;
  std::vector<std::string> ids;
  for (const auto& [id, _] : events) ids.push_back(id);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  rng.shuffle(ids);
  const auto n = static_cast<std::size_t>(std::llround(rate * static_cast<double>(ids.size())));
  for (std::size_t i = 0; i < n && i < ids.size(); ++i) {
    std::string& label = events[ids[i]];
    std::vector<std::string> others;
    for (const auto& l : label_set) {
      if (l != label) others.push_back(l);
    }
    label = rng.pick(others);
  }
  return events;
}

SeedOutcome run_seed(const ExperimentConfig& config, std::uint64_t seed) {
  const Data data = load_data(config, seed);
  const auto train = data.corpus.in_split(Split::Train);
  const auto eval = data.corpus.in_split(config.eval_split);
  if (train.empty() || eval.empty()) throw DataError("experiment needs non-empty train and evaluation splits");
  const EventLabels train_events = gold_events(train);
  const EventLabels eval_gold = gold_events(eval);

  SeedOutcome out;
  auto train_and_eval = [&](const std::string& name, Scope scope, TaggerVariant variant) {
    const auto model = train_tagger(train, data.graph, train_events, tagger_hyper(config, seed, scope, variant));
    out.reports.push_back({name, evaluate_tagger(model, eval, data.graph, eval_gold, config.mode)});
    return model;
  };

  switch (config.kind) {
    case ExperimentKind::Ablation:
      train_and_eval("without-event", config.scope, TaggerVariant::WithoutEvent);
      train_and_eval("ea", config.scope, TaggerVariant::EventAugmentation);
      train_and_eval("eca", config.scope, TaggerVariant::CausalAugmentation);
      break;
    case ExperimentKind::ContextScope:
      for (Scope s : {Scope::Sentence, Scope::Paragraph, Scope::Document}) {
        train_and_eval(std::string(to_string(s)), s, TaggerVariant::CausalAugmentation);
      }
      break;
    case ExperimentKind::EventErrorPropagation:
    case ExperimentKind::FullPipeline: {
      const auto classifier = train_event_classifier(train, {config.epochs, seed});
      EventLabels predicted;
      std::vector<std::string> gold_list, pred_list;
      for (const Document* d : eval) {
        predicted[d->doc_id] = predict_event(classifier, *d).event_type;
        gold_list.push_back(eval_gold.at(d->doc_id));
        pred_list.push_back(predicted[d->doc_id]);
      }
      out.event_f1 = micro_f1(gold_list, pred_list);
      const auto model = train_and_eval("eca-gold", config.scope, TaggerVariant::CausalAugmentation);
      if (config.kind == ExperimentKind::EventErrorPropagation) {
        predicted = corrupt(std::move(predicted), classifier.labels, config.corruption_rate, seed);
      }
      out.reports.push_back({"eca-pred", evaluate_tagger(model, eval, data.graph, predicted, config.mode)});
      break;
    }
  }
  return out;
}

EvalReport mean_report(const std::vector<EvalReport>& reports) {
  EvalReport mean;
  mean.mode = reports.front().mode;
  const auto n = static_cast<double>(reports.size());
  for (ArgumentType t : kArgumentTypes) {
    TypeScore s;
    for (const auto& r : reports) {
      const TypeScore& x = r.per_type.at(t);
      s.precision += x.precision / n;
      s.recall += x.recall / n;
      s.f1 += x.f1 / n;
      s.gold += x.gold;
      s.pred += x.pred;
      s.correct += x.correct;
    }
    mean.per_type[t] = s;
  }
  for (const auto& r : reports) mean.macro_avg_f1 += r.macro_avg_f1 / n;
  return mean;
}

std::uint64_t parse_seed(const nlohmann::json& v) {
  if (!v.is_number_unsigned()) throw ConfigError("experiment config: seeds must be non-negative integers");
  return v.get<std::uint64_t>();
}

SyntheticParams parse_synthetic(const nlohmann::json& j) {
  static const std::set<std::string> kKeys = {"n_events",         "docs_per_event",    "sentences_per_doc", "vocab_overlap",
                                              "causal_span_rate", "displacement_rate", "confounder_rate"};
  if (!j.is_object()) throw ConfigError("experiment config: synthetic must be an object");
  for (const auto& [k, _] : j.items()) {
    if (!kKeys.contains(k)) throw ConfigError("experiment config: unknown key synthetic." + k);
  }
  SyntheticParams p;
  auto count = [&](const char* key, std::size_t& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_unsigned()) throw ConfigError(std::string("experiment config: synthetic.") + key + " must be a count");
    dst = j[key].get<std::size_t>();
  };
  auto rate = [&](const char* key, double& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw ConfigError(std::string("experiment config: synthetic.") + key + " must be a number");
    dst = j[key].get<double>();
  };
  count("n_events", p.n_events);
  count("docs_per_event", p.docs_per_event);
  count("sentences_per_doc", p.sentences_per_doc);
  rate("vocab_overlap", p.vocab_overlap);
  rate("causal_span_rate", p.causal_span_rate);
  rate("displacement_rate", p.displacement_rate);
  rate("confounder_rate", p.confounder_rate);
  return p;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Ablation:
      return "ablation";
    case ExperimentKind::ContextScope:
      return "context_scope";
    case ExperimentKind::EventErrorPropagation:
      return "event_error_propagation";
    case ExperimentKind::FullPipeline:
      return "full_pipeline";
  }
  return "ablation";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto k : {ExperimentKind::Ablation, ExperimentKind::ContextScope, ExperimentKind::EventErrorPropagation,
                 ExperimentKind::FullPipeline}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("experiment config: unknown kind '" + std::string(name) + "'");
}

ExperimentConfig parse_experiment_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  static const std::set<std::string> kKeys = {"kind",   "seeds",         "synthetic",      "corpus",          "graph",
                                              "scope",  "paragraph_len", "token_budget",   "epochs",          "corruption_rate",
                                              "mode",   "split",         "parallel"};
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  for (const auto& [k, _] : j.items()) {
    if (!kKeys.contains(k)) throw ConfigError("experiment config: unknown key " + k);
  }
  ExperimentConfig c;
  try {
    if (!j.contains("kind")) throw ConfigError("experiment config: missing key kind");
    c.kind = parse_experiment_kind(j.at("kind").get<std::string>());
    if (j.contains("seeds")) {
      if (!j["seeds"].is_array()) throw ConfigError("experiment config: seeds must be a list");
      for (const auto& s : j["seeds"]) c.seeds.push_back(parse_seed(s));
    } else {
      c.seeds = {1};
    }
    if (c.seeds.empty()) throw ConfigError("experiment config: seeds must be non-empty");
    const bool has_file = j.contains("corpus") || j.contains("graph");
    if (j.contains("synthetic") && has_file) throw ConfigError("experiment config: give either synthetic or corpus/graph");
    if (has_file) {
      if (!j.contains("corpus") || !j.contains("graph")) throw ConfigError("experiment config: corpus and graph go together");
      auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_absolute() ? path : base_dir / path;
      };
      c.corpus_path = resolve(j["corpus"].get<std::string>());
      c.graph_path = resolve(j["graph"].get<std::string>());
      for (const auto& p : {c.corpus_path, c.graph_path}) {
        if (!std::filesystem::exists(p)) throw ConfigError("experiment config: path does not exist: " + p.string());
      }
    } else {
      c.synthetic = j.contains("synthetic") ? parse_synthetic(j["synthetic"]) : SyntheticParams{};
    }
    if (j.contains("scope")) c.scope = parse_scope(j["scope"].get<std::string>());
    if (j.contains("paragraph_len")) c.paragraph_len = j["paragraph_len"].get<std::size_t>();
    if (j.contains("token_budget")) c.token_budget = j["token_budget"].get<std::size_t>();
    if (j.contains("epochs")) c.epochs = j["epochs"].get<std::size_t>();
    if (j.contains("corruption_rate")) c.corruption_rate = j["corruption_rate"].get<double>();
    if (j.contains("mode")) c.mode = parse_match_mode(j["mode"].get<std::string>());
    if (j.contains("split")) c.eval_split = parse_split(j["split"].get<std::string>());
    if (j.contains("parallel")) c.parallel = j["parallel"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  } catch (const DataError& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  if (c.corruption_rate < 0.0 || c.corruption_rate > 1.0) {
    throw ConfigError("experiment config: corruption_rate must lie in [0, 1]");
  }
  if (c.paragraph_len == 0 || c.epochs == 0) throw ConfigError("experiment config: paragraph_len and epochs must be positive");
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("experiment config " + path.string() + ": " + e.what());
  }
  return parse_experiment_config(j, path.parent_path());
}

const SystemResult& ExperimentResult::system(std::string_view name) const {
  for (const auto& s : systems) {
    if (s.system == name) return s;
  }
  throw DataError("no system named " + std::string(name));
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.seeds.empty()) throw ConfigError("experiment config: seeds must be non-empty");
  std::vector<SeedOutcome> outcomes;
  if (config.parallel && config.seeds.size() > 1) {
    std::vector<std::future<SeedOutcome>> futures;
    for (auto seed : config.seeds) futures.push_back(std::async(std::launch::async, run_seed, std::cref(config), seed));
    for (auto& f : futures) outcomes.push_back(f.get());
  } else {
    for (auto seed : config.seeds) outcomes.push_back(run_seed(config, seed));
  }

  ExperimentResult result;
  result.kind = config.kind;
  result.seeds = config.seeds;
  for (std::size_t i = 0; i < outcomes.front().reports.size(); ++i) {
    SystemResult sys;
    sys.system = outcomes.front().reports[i].system;
    for (const auto& o : outcomes) {
      sys.per_seed.push_back(o.reports[i].report);
      sys.causal_f1_per_seed.push_back(pooled_f1(o.reports[i].report, kCausalTypes));
    }
    sys.mean = mean_report(sys.per_seed);
    for (double f : sys.causal_f1_per_seed) sys.causal_f1_mean += f / static_cast<double>(outcomes.size());
    result.systems.push_back(std::move(sys));
  }
  for (const auto& o : outcomes) {
    if (o.event_f1) result.event_f1_per_seed.push_back(*o.event_f1);
  }
  return result;
}

nlohmann::json to_json(const ExperimentResult& result) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(result.kind));
  j["seeds"] = result.seeds;
  j["systems"] = nlohmann::json::array();
  for (const auto& s : result.systems) {
    nlohmann::json sj;
    sj["system"] = s.system;
    sj["mean"] = to_json(s.mean);
    sj["causal_f1_mean"] = s.causal_f1_mean;
    sj["per_seed"] = nlohmann::json::array();
    for (std::size_t i = 0; i < s.per_seed.size(); ++i) {
      sj["per_seed"].push_back({{"seed", result.seeds[i]},
                                {"report", to_json(s.per_seed[i])},
                                {"causal_f1", s.causal_f1_per_seed[i]}});
    }
    j["systems"].push_back(std::move(sj));
  }
  if (!result.event_f1_per_seed.empty()) j["event_micro_f1_per_seed"] = result.event_f1_per_seed;
  return j;
}

std::string format_result(const ExperimentResult& result) {
  std::vector<std::pair<std::string, EvalReport>> rows;
  for (const auto& s : result.systems) rows.emplace_back(s.system, s.mean);
  std::string out = fmt::format("{} over {} seed(s)\n", to_string(result.kind), result.seeds.size());
  out += format_table(rows);
  for (const auto& s : result.systems) {
    out += fmt::format("{} Reason+AfterEffect F1: {:.2f}\n", s.system, 100.0 * s.causal_f1_mean);
  }
  if (!result.event_f1_per_seed.empty()) {
    double mean = 0.0;
    for (double f : result.event_f1_per_seed) mean += f / static_cast<double>(result.event_f1_per_seed.size());
    out += fmt::format("event micro F1: {:.2f}\n", 100.0 * mean);
  }
  return out;
}

}  // namespace eca
