#include "eca/pipeline.hpp"

#include <functional>
#include <set>

#include <spdlog/spdlog.h>

#include "eca/error.hpp"
#include "eca/util.hpp"

namespace eca {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kTopKeys = {"corpus",   "ontology",      "graph",        "out_dir", "kb",
                                        "scope",    "paragraph_len", "token_budget", "seed",    "epochs",
                                        "template", "backend",       "variant",      "eval",    "phrases",
                                        "log_level"};
const std::set<std::string> kKbKeys = {"mode", "fixture_dir", "base_urls", "rate_limit_rps", "max_retries"};
const std::set<std::string> kBaseUrlKeys = {"conceptnet", "wikipedia"};
const std::set<std::string> kEvalKeys = {"mode", "split"};
const std::set<std::string> kPhraseKeys = {"stopwords"};
const std::set<std::string> kLogLevels = {"trace", "debug", "info", "warn", "error", "critical", "off"};

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& prefix) {
  if (!j.is_object()) throw ConfigError("config: " + (prefix.empty() ? std::string("top level") : prefix) + " must be an object");
  for (const auto& [k, _] : j.items()) {
    if (!allowed.contains(k)) throw ConfigError("config: unknown key '" + prefix + k + "'");
  }
}

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for key '" + key + "'");
  }
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("config: key '" + key + "' must be a string");
  return j.get<std::string>();
}

std::size_t get_count(const json& j, const std::string& key) {
  if (!j.is_number_unsigned() || j.get<std::size_t>() == 0) {
    throw ConfigError("config: key '" + key + "' must be a positive integer");
  }
  return j.get<std::size_t>();
}

/// Wraps enum parsers so that their errors name the key.
template <typename F>
auto parse_enum(const json& j, const std::string& key, F parse) {
  const std::string value = get_string(j, key);
  try {
    return parse(value);
  } catch (const Error&) {
    throw ConfigError("config: bad value '" + value + "' for key '" + key + "'");
  }
}

json predicted_span_json(const ArgumentSpan& sp) {
  return {{"type", std::string(to_string(sp.type))}, {"start", sp.start}, {"end", sp.end}};
}

std::string hash_parts(const std::vector<std::string>& parts) {
  std::string material;
  for (const auto& p : parts) {
    material += p;
    material.push_back('\n');
  }
  return sha256_hex(material);
}

/// Serialized JSON artifact with its inputs hash embedded.
std::string with_inputs_hash(std::string_view serialized, const std::string& inputs_hash) {
  json j = json::parse(serialized);
  j["inputs_hash"] = inputs_hash;
  return j.dump(2) + "\n";
}

std::string doc_list_message(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < 5; ++i) out += (i ? ", " : "") + ids[i];
  if (ids.size() > 5) out += ", ...";
  return out;
}

[[noreturn]] void rethrow_in_stage(const std::string& stage) {
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError("stage " + stage + ": " + e.what());
  } catch (const KbError& e) {
    throw KbError("stage " + stage + ": " + e.what(), e.retryable());
  } catch (const DataError& e) {
    throw DataError("stage " + stage + ": " + e.what());
  } catch (const json::exception& e) {
    throw DataError("stage " + stage + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error("stage " + stage + ": " + e.what());
  }
}

}  // namespace

fs::path PipelineConfig::resolve(const std::string& p) const {
  fs::path path(p);
  return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
}

KbConfig PipelineConfig::kb_config() const {
  KbConfig kb;
  kb.mode = kb_mode;
  kb.fixture_dir = resolve(fixture_dir);
  kb.conceptnet_base = conceptnet_base;
  kb.wikipedia_base = wikipedia_base;
  kb.rate_limit_rps = rate_limit_rps;
  kb.max_retries = max_retries;
  return kb;
}

TaggerHyper PipelineConfig::tagger_hyper() const {
  TaggerHyper h;
  h.epochs = epochs;
  h.seed = seed;
  h.scope = scope;
  h.paragraph_len = paragraph_len;
  h.token_budget = token_budget;
  h.variant = variant;
  h.feature_template = feature_template;
  return h;
}

StopwordRegistry PipelineConfig::stopword_registry() const {
  StopwordRegistry reg;
  for (const auto& [lang, path] : stopwords) reg.load(lang, resolve(path));
  return reg;
}

PipelineConfig parse_pipeline_config(const json& j, const fs::path& base_dir, bool check_paths) {
  reject_unknown(j, kTopKeys, "");
  PipelineConfig c;
  c.base_dir = base_dir;
  for (const char* key : {"corpus", "ontology"}) {
    if (!j.contains(key)) throw ConfigError(std::string("config: missing key '") + key + "'");
  }
  c.corpus = get_string(j["corpus"], "corpus");
  c.ontology = get_string(j["ontology"], "ontology");
  if (j.contains("graph")) c.graph = get_string(j["graph"], "graph");
  if (j.contains("out_dir")) c.out_dir = get_string(j["out_dir"], "out_dir");

  if (j.contains("kb")) {
    const json& kb = j["kb"];
    reject_unknown(kb, kKbKeys, "kb.");
    if (kb.contains("mode")) c.kb_mode = parse_enum(kb["mode"], "kb.mode", parse_kb_mode);
    if (kb.contains("fixture_dir")) c.fixture_dir = get_string(kb["fixture_dir"], "kb.fixture_dir");
    if (kb.contains("base_urls")) {
      const json& urls = kb["base_urls"];
      reject_unknown(urls, kBaseUrlKeys, "kb.base_urls.");
      if (urls.contains("conceptnet")) c.conceptnet_base = get_string(urls["conceptnet"], "kb.base_urls.conceptnet");
      if (urls.contains("wikipedia")) c.wikipedia_base = get_string(urls["wikipedia"], "kb.base_urls.wikipedia");
    }
    if (kb.contains("rate_limit_rps")) {
      if (!kb["rate_limit_rps"].is_number() || kb["rate_limit_rps"].get<double>() <= 0.0) {
        throw ConfigError("config: key 'kb.rate_limit_rps' must be a positive number");
      }
      c.rate_limit_rps = kb["rate_limit_rps"].get<double>();
    }
    if (kb.contains("max_retries")) {
      if (!kb["max_retries"].is_number_integer() || kb["max_retries"].get<long long>() < 0) throw ConfigError("config: key 'kb.max_retries' must be a count");
      c.max_retries = kb["max_retries"].get<int>();
    }
  }

  if (j.contains("scope")) c.scope = parse_enum(j["scope"], "scope", parse_scope);
  if (j.contains("paragraph_len")) c.paragraph_len = get_count(j["paragraph_len"], "paragraph_len");
  if (j.contains("token_budget")) c.token_budget = get_count(j["token_budget"], "token_budget");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("config: key 'seed' must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("epochs")) c.epochs = get_count(j["epochs"], "epochs");
  if (j.contains("template")) c.feature_template = get_string(j["template"], "template");
  if (j.contains("backend")) {
    c.backend = get_string(j["backend"], "backend");
    if (c.backend != "perceptron") {
      throw ConfigError("config: bad value '" + c.backend + "' for key 'backend' (available: perceptron)");
    }
  }
  if (j.contains("variant")) c.variant = parse_enum(j["variant"], "variant", parse_variant);
  if (j.contains("eval")) {
    const json& ev = j["eval"];
    reject_unknown(ev, kEvalKeys, "eval.");
    if (ev.contains("mode")) c.eval_mode = parse_enum(ev["mode"], "eval.mode", parse_match_mode);
    if (ev.contains("split")) c.eval_split = parse_enum(ev["split"], "eval.split", parse_split);
  }
  if (j.contains("phrases")) {
    const json& ph = j["phrases"];
    reject_unknown(ph, kPhraseKeys, "phrases.");
    if (ph.contains("stopwords")) {
      if (!ph["stopwords"].is_object()) throw ConfigError("config: key 'phrases.stopwords' must be an object");
      for (const auto& [lang, path] : ph["stopwords"].items()) {
        c.stopwords[lang] = get_string(path, "phrases.stopwords." + lang);
      }
    }
  }
  if (j.contains("log_level")) {
    c.log_level = get_string(j["log_level"], "log_level");
    if (!kLogLevels.contains(c.log_level)) throw ConfigError("config: bad value '" + c.log_level + "' for key 'log_level'");
  }

  if (check_paths) {
    auto must_exist = [&](const std::string& key, const std::string& p) {
      if (!fs::exists(c.resolve(p))) throw ConfigError("config: path for '" + key + "' does not exist: " + p);
    };
    must_exist("corpus", c.corpus);
    must_exist("ontology", c.ontology);
    if (c.graph) must_exist("graph", *c.graph);
    if (c.kb_mode == KbMode::Fixture && !c.graph) must_exist("kb.fixture_dir", c.fixture_dir);
    for (const auto& [lang, p] : c.stopwords) must_exist("phrases.stopwords." + lang, p);
  }
  return c;
}

PipelineConfig validate_config(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return parse_pipeline_config(j, path.parent_path());
}

json to_json(const PipelineConfig& c) {
  json j;
  j["corpus"] = c.corpus;
  j["ontology"] = c.ontology;
  if (c.graph) j["graph"] = *c.graph;
  j["out_dir"] = c.out_dir;
  j["kb"] = {{"mode", std::string(to_string(c.kb_mode))},
             {"fixture_dir", c.fixture_dir},
             {"base_urls", {{"conceptnet", c.conceptnet_base}, {"wikipedia", c.wikipedia_base}}},
             {"rate_limit_rps", c.rate_limit_rps},
             {"max_retries", c.max_retries}};
  j["scope"] = std::string(to_string(c.scope));
  j["paragraph_len"] = c.paragraph_len;
  j["token_budget"] = c.token_budget;
  j["seed"] = c.seed;
  j["epochs"] = c.epochs;
  j["template"] = c.feature_template;
  j["backend"] = c.backend;
  j["variant"] = std::string(to_string(c.variant));
  j["eval"] = {{"mode", std::string(to_string(c.eval_mode))}, {"split", std::string(to_string(c.eval_split))}};
  j["phrases"] = {{"stopwords", c.stopwords}};
  j["log_level"] = c.log_level;
  return j;
}

std::string dump_event_predictions(const std::vector<EventPredictionRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += json{{"doc_id", r.doc_id}, {"event_type", r.event_type}, {"score", r.score}}.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<EventPredictionRecord> parse_event_predictions(std::string_view text) {
  std::vector<EventPredictionRecord> out;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      out.push_back({j.at("doc_id").get<std::string>(), j.at("event_type").get<std::string>(),
                     j.value("score", 0.0)});
    } catch (const json::exception& e) {
      throw DataError("event predictions line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

EventLabels event_labels(const std::vector<EventPredictionRecord>& records) {
  EventLabels out;
  for (const auto& r : records) out[r.doc_id] = r.event_type;
  return out;
}

std::string dump_arg_predictions(const Corpus& corpus, const std::map<std::string, std::vector<PredictedSpan>>& preds) {
  std::string out;
  for (const auto& doc : corpus.documents) {
    auto it = preds.find(doc.doc_id);
    if (it == preds.end()) continue;
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      json spans = json::array();
      for (const auto& p : it->second) {
        if (p.sentence == s) spans.push_back(predicted_span_json(p.span));
      }
      out += json{{"doc_id", doc.doc_id}, {"sentence", s}, {"spans", spans}}.dump();
      out.push_back('\n');
    }
  }
  return out;
}

std::vector<LocatedSpan> parse_arg_predictions(std::string_view text) {
  std::vector<LocatedSpan> out;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      const auto doc_id = j.at("doc_id").get<std::string>();
      const auto sentence = j.at("sentence").get<std::size_t>();
      for (const auto& sp : j.at("spans")) {
        ArgumentSpan span{parse_argument_type(sp.at("type").get<std::string>()), sp.at("start").get<std::size_t>(),
                          sp.at("end").get<std::size_t>()};
        if (span.start >= span.end) throw DataError("span end must exceed start");
        out.push_back({doc_id, sentence, span});
      }
    } catch (const json::exception& e) {
      throw DataError("argument predictions line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("argument predictions line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

EvalReport evaluate_predictions(const Corpus& gold, std::span<const LocatedSpan> pred, MatchMode mode, Split split) {
  const auto docs = gold.in_split(split);
  std::set<std::string, std::less<>> ids;
  for (const Document* d : docs) ids.insert(d->doc_id);
  std::vector<LocatedSpan> kept;
  for (const auto& p : pred) {
    if (ids.contains(p.doc_id)) kept.push_back(p);
  }
  const auto g = gold_spans(docs);
  return span_prf(g, kept, mode);
}

CausalGraph build_graph_from_config(const PipelineConfig& config) {
  if (config.graph) return load_graph(config.resolve(*config.graph));
  CausalGraph ontology = load_ontology(config.resolve(config.ontology));
  KbClient kb(config.kb_config());
  return build_graph(std::move(ontology), kb, config.stopword_registry());
}

PipelineResult run_pipeline(const PipelineConfig& config, const fs::path& out_dir_override) {
  PipelineResult result;
  result.out_dir = out_dir_override.empty() ? config.resolve(config.out_dir) : out_dir_override;
  const fs::path out = result.out_dir;
  fs::create_directories(out);

  // input fingerprints
  const fs::path corpus_path = config.resolve(config.corpus);
  json inputs;
  std::string corpus_hash, graph_source_hash;
  try {
    corpus_hash = sha256_file(corpus_path);
    inputs["corpus"] = corpus_hash;
    if (config.graph) {
      graph_source_hash = sha256_file(config.resolve(*config.graph));
      inputs["graph"] = graph_source_hash;
    } else {
      inputs["ontology"] = sha256_file(config.resolve(config.ontology));
      if (config.kb_mode == KbMode::Fixture) inputs["kb_fixtures"] = sha256_tree(config.resolve(config.fixture_dir));
      json sw = json::object();
      for (const auto& [lang, p] : config.stopwords) sw[lang] = sha256_file(config.resolve(p));
      inputs["stopwords"] = sw;
      graph_source_hash = hash_parts({inputs.dump()});
    }
  } catch (const DataError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  // the snapshot leaves out out_dir so that runs into different directories compare equal
  json snapshot = to_json(config);
  snapshot.erase("out_dir");
  const std::string config_hash = sha256_hex(snapshot.dump());

  // previous manifest, for stage skipping
  const fs::path manifest_path = out / "manifest.json";
  std::map<std::string, json> previous;
  if (fs::exists(manifest_path)) {
    try {
      const json old = json::parse(read_file(manifest_path));
      if (old.value("version", "") == kPipelineVersion) {
        for (const auto& s : old.at("stages")) previous[s.at("name").get<std::string>()] = s;
      }
    } catch (const std::exception& e) {
      spdlog::warn("ignoring unreadable manifest {}: {}", manifest_path.string(), e.what());
    }
  }

  auto write_manifest = [&]() {
    json m;
    m["version"] = std::string(kPipelineVersion);
    m["config"] = snapshot;
    m["inputs"] = inputs;
    m["stages"] = json::array();
    for (const auto& s : result.stages) {
      m["stages"].push_back(
          {{"name", s.name}, {"artifact", s.artifact}, {"inputs_hash", s.inputs_hash}, {"sha256", s.sha256}});
    }
    write_file_atomic(manifest_path, m.dump(2) + "\n");
  };

  // Runs one stage unless its recorded inputs hash and artifact hash still
  // match; returns the artifact's sha256.
  auto stage = [&](const std::string& name, const std::string& artifact, const std::string& inputs_hash, bool cacheable,
                   const std::function<std::string()>& produce) {
    const fs::path path = out / artifact;
    StageRecord rec{name, artifact, inputs_hash, "", false};
    if (auto it = previous.find(name); cacheable && it != previous.end() && fs::exists(path)) {
      const json& old = it->second;
      if (old.value("inputs_hash", "") == inputs_hash && old.value("artifact", "") == artifact &&
          old.value("sha256", "") == sha256_file(path)) {
        rec.sha256 = old.at("sha256").get<std::string>();
        rec.skipped = true;
        spdlog::info("stage {}: inputs unchanged, skipped", name);
      }
    }
    if (!rec.skipped) {
      spdlog::info("stage {}: running", name);
      try {
        write_file_atomic(path, produce());
        rec.sha256 = sha256_file(path);
      } catch (...) {
        std::error_code ec;
        fs::remove(path, ec);
        fs::path tmp = path;
        tmp += ".tmp";
        fs::remove(tmp, ec);
        rethrow_in_stage(name);
      }
    }
    result.stages.push_back(rec);
    write_manifest();
    return rec.sha256;
  };

  // Loading helpers share one parsed corpus.
  std::optional<Corpus> corpus_cache;
  auto corpus = [&]() -> const Corpus& {
    if (!corpus_cache) corpus_cache = load_corpus(corpus_path);
    return *corpus_cache;
  };

  const bool live = config.kb_mode == KbMode::Live && !config.graph;
  const json kb_settings = snapshot.at("kb");
  const std::string graph_hash = hash_parts({"build-graph", graph_source_hash, kb_settings.dump()});
  const std::string graph_sha = stage("build-graph", "graph.json", graph_hash, !live, [&]() {
    return with_inputs_hash(serialize_graph(build_graph_from_config(config)), graph_hash);
  });
  auto graph = [&]() { return parse_graph(read_file(out / "graph.json")); };

  const std::string event_hash =
      hash_parts({"train-event", corpus_hash, std::to_string(config.seed), std::to_string(config.epochs)});
  const std::string event_model_sha = stage("train-event", "event_model.json", event_hash, true, [&]() {
    const auto model = train_event_classifier(corpus().in_split(Split::Train), {config.epochs, config.seed});
    return with_inputs_hash(serialize_classifier(model), event_hash);
  });

  const std::string event_pred_hash = hash_parts({"predict-event", corpus_hash, event_model_sha});
  const std::string event_pred_sha = stage("predict-event", "event_predictions.jsonl", event_pred_hash, true, [&]() {
    const auto model = parse_classifier(read_file(out / "event_model.json"));
    std::vector<EventPredictionRecord> records;
    for (const auto& d : corpus().documents) {
      const auto p = predict_event(model, d);
      records.push_back({d.doc_id, p.event_type, p.score});
    }
    return dump_event_predictions(records);
  });

  json tagger_settings = snapshot;
  for (const char* k : {"kb", "eval", "phrases", "log_level", "corpus", "ontology", "graph"}) tagger_settings.erase(k);
  const std::string args_hash = hash_parts({"train-args", corpus_hash, graph_sha, tagger_settings.dump()});
  const std::string arg_model_sha = stage("train-args", "arg_model.json", args_hash, true, [&]() {
    const auto train = corpus().in_split(Split::Train);
    EventLabels gold;
    std::vector<std::string> missing;
    for (const Document* d : train) {
      if (auto label = derive_doc_event_label(*d)) {
        gold[d->doc_id] = *label;
      } else {
        missing.push_back(d->doc_id);
      }
    }
    if (!missing.empty()) throw DataError("training documents without an event label: " + doc_list_message(missing));
    const auto model = train_tagger(train, graph(), gold, config.tagger_hyper());
    return with_inputs_hash(serialize_tagger(model), args_hash);
  });

  const std::string arg_pred_hash = hash_parts({"predict-args", corpus_hash, graph_sha, event_pred_sha, arg_model_sha});
  const std::string arg_pred_sha = stage("predict-args", "arg_predictions.jsonl", arg_pred_hash, true, [&]() {
    const auto model = parse_tagger(read_file(out / "arg_model.json"));
    const auto g = graph();
    const auto events = event_labels(parse_event_predictions(read_file(out / "event_predictions.jsonl")));
    std::map<std::string, std::vector<PredictedSpan>> preds;
    for (const auto& d : corpus().documents) {
      auto it = events.find(d.doc_id);
      if (it == events.end()) throw DataError("no predicted event for document " + d.doc_id);
      preds[d.doc_id] = predict_args(model, d, it->second, g);
    }
    return dump_arg_predictions(corpus(), preds);
  });

  const std::string eval_hash = hash_parts({"evaluate", corpus_hash, arg_pred_sha, std::string(to_string(config.eval_mode)),
                                            std::string(to_string(config.eval_split))});
  stage("evaluate", "eval_report.json", eval_hash, true, [&]() {
    const auto pred = parse_arg_predictions(read_file(out / "arg_predictions.jsonl"));
    json j = to_json(evaluate_predictions(corpus(), pred, config.eval_mode, config.eval_split));
    j["split"] = std::string(to_string(config.eval_split));
    j["inputs_hash"] = eval_hash;
    return j.dump(2) + "\n";
  });

  const auto pred = parse_arg_predictions(read_file(out / "arg_predictions.jsonl"));
  result.report = evaluate_predictions(corpus(), pred, config.eval_mode, config.eval_split);
  return result;
}

}  // namespace eca
