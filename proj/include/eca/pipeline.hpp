#pragma once

// End-to-end pipeline: build-graph -> train-event -> predict-event ->
// train-args -> predict-args -> evaluate. Each stage writes one artifact;
// manifest.json records the config snapshot, input hashes and per-stage
// hashes so unchanged stages are skipped on rerun.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eca/eval.hpp"
#include "eca/event_cls.hpp"
#include "eca/kb.hpp"
#include "eca/phrases.hpp"
#include "eca/tagger.hpp"

namespace eca {

inline constexpr std::string_view kPipelineVersion = "eca-pipeline/1";

struct PipelineConfig {
  // Paths exactly as written; relative ones resolve against base_dir.
  std::string corpus;
  std::string ontology;
  std::optional<std::string> graph;  // prebuilt graph; skips knowledge-base access
  std::string out_dir = "out";

  KbMode kb_mode = KbMode::Fixture;
  std::string fixture_dir = "fixtures/kb";
  std::string conceptnet_base = "https://api.conceptnet.io";
  std::string wikipedia_base = "https://en.wikipedia.org/w/api.php";
  double rate_limit_rps = 2.0;
  int max_retries = 3;

  Scope scope = Scope::Document;
  std::size_t paragraph_len = 4;
  std::size_t token_budget = 512;
  std::uint64_t seed = 1;
  std::size_t epochs = 10;
  std::string feature_template = std::string(kDefaultTemplate);
  std::string backend = "perceptron";
  TaggerVariant variant = TaggerVariant::CausalAugmentation;
  MatchMode eval_mode = MatchMode::ExactSpan;
  Split eval_split = Split::Test;
  std::map<std::string, std::string> stopwords;  // phrases.stopwords: language -> word list path
  std::string log_level = "info";

  std::filesystem::path base_dir;  // not serialized

  std::filesystem::path resolve(const std::string& p) const;
  KbConfig kb_config() const;
  TaggerHyper tagger_hyper() const;
  StopwordRegistry stopword_registry() const;
};

/// Applies defaults and rejects unknown keys and bad enum values, naming the
/// key. With `check_paths`, referenced inputs must exist.
PipelineConfig parse_pipeline_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {},
                                     bool check_paths = true);
PipelineConfig validate_config(const std::filesystem::path& path);
/// Every key, with defaults filled in.
nlohmann::json to_json(const PipelineConfig& config);

// Prediction files, one JSON object per line.
struct EventPredictionRecord {
  std::string doc_id;
  std::string event_type;
  double score = 0.0;
};

std::string dump_event_predictions(const std::vector<EventPredictionRecord>& records);
std::vector<EventPredictionRecord> parse_event_predictions(std::string_view text);
EventLabels event_labels(const std::vector<EventPredictionRecord>& records);

/// One line per sentence: {"doc_id", "sentence", "spans": [{"type","start","end"}]}.
std::string dump_arg_predictions(const Corpus& corpus, const std::map<std::string, std::vector<PredictedSpan>>& preds);
std::vector<LocatedSpan> parse_arg_predictions(std::string_view text);

/// Scores predictions against the gold spans of one split; predictions for
/// documents outside the split are ignored.
EvalReport evaluate_predictions(const Corpus& gold, std::span<const LocatedSpan> pred, MatchMode mode, Split split);

/// Graph from config.graph when set, otherwise built from the ontology and the
/// knowledge bases.
CausalGraph build_graph_from_config(const PipelineConfig& config);

struct StageRecord {
  std::string name;
  std::string artifact;
  std::string inputs_hash;
  std::string sha256;
  bool skipped = false;  // reported, not persisted
};

struct PipelineResult {
  std::filesystem::path out_dir;
  std::vector<StageRecord> stages;
  EvalReport report;
};

/// Runs every stage in order into `out_dir` (config.out_dir when empty).
/// A failing stage removes its partial output and rethrows with the stage
/// name, keeping the error category.
PipelineResult run_pipeline(const PipelineConfig& config, const std::filesystem::path& out_dir = {});

}  // namespace eca
