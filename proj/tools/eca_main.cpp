// Command-line front end. Exit codes: 0 success, 1 unexpected failure,
// 2 config error, 3 data error, 4 knowledge-base error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "eca/error.hpp"
#include "eca/experiment.hpp"
#include "eca/pipeline.hpp"
#include "eca/util.hpp"

namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string log_level;
};

// Options shared by several subcommands; empty means "take it from --config".
struct Options {
  std::string corpus, ontology, graph, model, events, out, gold, pred, fixture_dir;
  std::string scope, variant, mode, split, template_text;
  std::size_t epochs = 0;
  std::string kb_mode;
};

std::optional<eca::PipelineConfig> pipeline_config(const Globals& g) {
  if (g.config.empty()) return std::nullopt;
  auto c = eca::validate_config(g.config);
  if (g.seed) c.seed = *g.seed;
  return c;
}

std::string pick(const std::string& explicit_value, const std::optional<eca::PipelineConfig>& cfg,
                 std::string eca::PipelineConfig::*member, const char* flag) {
  if (!explicit_value.empty()) return explicit_value;
  if (cfg) return cfg->resolve((*cfg).*member).string();
  throw eca::ConfigError(std::string("missing ") + flag);
}

std::string require(const std::string& v, const char* flag) {
  if (v.empty()) throw eca::ConfigError(std::string("missing ") + flag);
  return v;
}

eca::TaggerHyper tagger_hyper(const Globals& g, const std::optional<eca::PipelineConfig>& cfg, const Options& o) {
  eca::TaggerHyper h = cfg ? cfg->tagger_hyper() : eca::TaggerHyper{};
  if (g.seed) h.seed = *g.seed;
  if (!o.scope.empty()) h.scope = eca::parse_scope(o.scope);
  if (!o.variant.empty()) h.variant = eca::parse_variant(o.variant);
  if (o.epochs) h.epochs = o.epochs;
  if (!o.template_text.empty()) h.feature_template = o.template_text;
  return h;
}

eca::EventLabels load_events(const std::string& events, const eca::Corpus& corpus) {
  if (events.empty() || events == "gold") {
    eca::EventLabels out;
    for (const auto& d : corpus.documents) {
      if (auto label = eca::derive_doc_event_label(d)) out[d.doc_id] = *label;
    }
    return out;
  }
  return eca::event_labels(eca::parse_event_predictions(eca::read_file(events)));
}

void apply_kb_mode(eca::PipelineConfig& c, const std::string& kb_mode) {
  if (!kb_mode.empty()) c.kb_mode = eca::parse_kb_mode(kb_mode);
}

int run_build_graph(const Globals& g, const Options& o) {
  auto cfg = pipeline_config(g);
  eca::PipelineConfig c;
  if (cfg) {
    c = *cfg;
  } else {
    c.corpus = "";
    c.ontology = require(o.ontology, "--ontology");
  }
  if (!o.ontology.empty()) {
    c.ontology = fs::absolute(o.ontology).string();
    c.graph.reset();
  }
  if (!o.fixture_dir.empty()) c.fixture_dir = fs::absolute(o.fixture_dir).string();
  apply_kb_mode(c, o.kb_mode);
  const auto graph = eca::build_graph_from_config(c);
  eca::save_graph(graph, require(o.out, "--out"));
  spdlog::info("wrote {} events to {}", graph.events().size(), o.out);
  return 0;
}

int run_train_event(const Globals& g, const Options& o) {
  auto cfg = pipeline_config(g);
  const auto corpus = eca::load_corpus(pick(o.corpus, cfg, &eca::PipelineConfig::corpus, "--corpus"));
  eca::EventClassifierHyper h;
  if (cfg) h = {cfg->epochs, cfg->seed};
  if (g.seed) h.seed = *g.seed;
  if (o.epochs) h.epochs = o.epochs;
  const auto model = eca::train_event_classifier(corpus.in_split(eca::Split::Train), h);
  eca::write_file_atomic(require(o.out, "--out"), eca::serialize_classifier(model));
  return 0;
}

int run_predict_event(const Globals& g, const Options& o) {
  auto cfg = pipeline_config(g);
  const auto corpus = eca::load_corpus(pick(o.corpus, cfg, &eca::PipelineConfig::corpus, "--corpus"));
  const auto model = eca::parse_classifier(eca::read_file(require(o.model, "--model")));
  std::vector<eca::EventPredictionRecord> records;
  for (const auto& d : corpus.documents) {
    const auto p = eca::predict_event(model, d);
    records.push_back({d.doc_id, p.event_type, p.score});
  }
  eca::write_file_atomic(require(o.out, "--out"), eca::dump_event_predictions(records));
  return 0;
}

int run_train_args(const Globals& g, const Options& o) {
  auto cfg = pipeline_config(g);
  const auto corpus = eca::load_corpus(pick(o.corpus, cfg, &eca::PipelineConfig::corpus, "--corpus"));
  const auto graph = eca::load_graph(require(o.graph, "--graph"));
  const auto events = load_events(o.events, corpus);
  const auto model = eca::train_tagger(corpus.in_split(eca::Split::Train), graph, events, tagger_hyper(g, cfg, o));
  eca::write_file_atomic(require(o.out, "--out"), eca::serialize_tagger(model));
  return 0;
}

int run_predict_args(const Globals& g, const Options& o) {
  auto cfg = pipeline_config(g);
  const auto corpus = eca::load_corpus(pick(o.corpus, cfg, &eca::PipelineConfig::corpus, "--corpus"));
  const auto graph = eca::load_graph(require(o.graph, "--graph"));
  const auto model = eca::parse_tagger(eca::read_file(require(o.model, "--model")));
  const auto events = load_events(o.events, corpus);
  std::map<std::string, std::vector<eca::PredictedSpan>> preds;
  for (const auto& d : corpus.documents) {
    auto it = events.find(d.doc_id);
    if (it == events.end()) throw eca::DataError("no event label for document " + d.doc_id);
    preds[d.doc_id] = eca::predict_args(model, d, it->second, graph);
  }
  eca::write_file_atomic(require(o.out, "--out"), eca::dump_arg_predictions(corpus, preds));
  return 0;
}

int run_evaluate(const Globals& g, const Options& o) {
  auto cfg = pipeline_config(g);
  const auto corpus = eca::load_corpus(pick(o.gold, cfg, &eca::PipelineConfig::corpus, "--gold"));
  const auto pred = eca::parse_arg_predictions(eca::read_file(require(o.pred, "--pred")));
  eca::MatchMode mode = cfg ? cfg->eval_mode : eca::MatchMode::ExactSpan;
  eca::Split split = cfg ? cfg->eval_split : eca::Split::Test;
  if (!o.mode.empty()) mode = eca::parse_match_mode(o.mode);
  if (!o.split.empty()) split = eca::parse_split(o.split);
  const auto report = eca::evaluate_predictions(corpus, pred, mode, split);
  std::cout << eca::format_table({{"system", report}});
  if (!o.out.empty()) eca::write_file_atomic(o.out, eca::to_json(report).dump(2) + "\n");
  return 0;
}

int run_experiment_cmd(const Globals& g, const Options& o) {
  auto config = eca::load_experiment_config(require(g.config, "--config"));
  if (g.seed) config.seeds = {*g.seed};
  const auto result = eca::run_experiment(config);
  const std::string table = eca::format_result(result);
  std::cout << table;
  if (!o.out.empty()) {
    eca::write_file_atomic(fs::path(o.out) / "results.json", eca::to_json(result).dump(2) + "\n");
    eca::write_file_atomic(fs::path(o.out) / "results.txt", table);
  }
  return 0;
}

int run_pipeline_cmd(const Globals& g, const Options& o) {
  auto c = pipeline_config(g);
  if (!c) throw eca::ConfigError("missing --config");
  apply_kb_mode(*c, o.kb_mode);
  if (g.log_level.empty()) spdlog::set_level(spdlog::level::from_str(c->log_level));
  const auto result = eca::run_pipeline(*c, o.out);
  std::cout << eca::format_table({{"pipeline", result.report}});
  for (const auto& s : result.stages) {
    std::cout << s.name << (s.skipped ? " (cached) " : " ") << (result.out_dir / s.artifact).string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("eca"));

  CLI::App app{"Event argument extraction with causal knowledge augmentation"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  Options o;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config, "Pipeline config (experiment config for 'experiment')");
  auto* seed_opt = app.add_option("--seed", seed, "Seed override");
  app.add_option("--log-level", g.log_level, "trace|debug|info|warn|error|critical|off");

  auto* build = app.add_subcommand("build-graph", "Build the causal graph from the ontology and knowledge bases");
  build->add_option("--ontology", o.ontology);
  build->add_option("--fixture-dir", o.fixture_dir);
  build->add_option("--out", o.out);
  build->add_option("--kb-mode", o.kb_mode, "fixture (default) or live");

  auto* train_event = app.add_subcommand("train-event", "Train the document event classifier");
  train_event->add_option("--corpus", o.corpus);
  train_event->add_option("--epochs", o.epochs);
  train_event->add_option("--out", o.out);

  auto* predict_event = app.add_subcommand("predict-event", "Predict document event types");
  predict_event->add_option("--model", o.model);
  predict_event->add_option("--corpus", o.corpus);
  predict_event->add_option("--out", o.out);

  auto* train_args = app.add_subcommand("train-args", "Train the argument tagger");
  train_args->add_option("--corpus", o.corpus);
  train_args->add_option("--graph", o.graph);
  train_args->add_option("--events", o.events, "Event predictions file, or 'gold'");
  train_args->add_option("--scope", o.scope);
  train_args->add_option("--variant", o.variant, "without-event|ea|eca");
  train_args->add_option("--epochs", o.epochs);
  train_args->add_option("--template", o.template_text);
  train_args->add_option("--out", o.out);

  auto* predict_args = app.add_subcommand("predict-args", "Tag argument spans");
  predict_args->add_option("--model", o.model);
  predict_args->add_option("--corpus", o.corpus);
  predict_args->add_option("--graph", o.graph);
  predict_args->add_option("--events", o.events, "Event predictions file, or 'gold'");
  predict_args->add_option("--out", o.out);

  auto* evaluate = app.add_subcommand("evaluate", "Score argument predictions");
  evaluate->add_option("--gold", o.gold);
  evaluate->add_option("--pred", o.pred);
  evaluate->add_option("--mode", o.mode, "exact_span|token_level");
  evaluate->add_option("--split", o.split, "train|valid|test");
  evaluate->add_option("--out", o.out);

  auto* experiment = app.add_subcommand("experiment", "Run a seeded experiment");
  experiment->add_option("--out", o.out);

  auto* pipeline = app.add_subcommand("pipeline", "Run every stage and write the artifact directory");
  pipeline->add_option("--out", o.out);
  pipeline->add_option("--kb-mode", o.kb_mode, "fixture (default) or live");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (!g.log_level.empty()) {
      const auto level = spdlog::level::from_str(g.log_level);
      if (level == spdlog::level::off && g.log_level != "off") throw eca::ConfigError("bad --log-level " + g.log_level);
      spdlog::set_level(level);
    }
    if (build->parsed()) return run_build_graph(g, o);
    if (train_event->parsed()) return run_train_event(g, o);
    if (predict_event->parsed()) return run_predict_event(g, o);
    if (train_args->parsed()) return run_train_args(g, o);
    if (predict_args->parsed()) return run_predict_args(g, o);
    if (evaluate->parsed()) return run_evaluate(g, o);
    if (experiment->parsed()) return run_experiment_cmd(g, o);
    if (pipeline->parsed()) return run_pipeline_cmd(g, o);
  } catch (const eca::ConfigError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const eca::DataError& e) {
    spdlog::error("{}", e.what());
    return 3;
  } catch (const eca::KbError& e) {
    spdlog::error("{}", e.what());
    return 4;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 1;
}
