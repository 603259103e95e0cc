#pragma once

// Seeded experiment harness: ablation over event information, context scope,
// event-label error propagation and the full classify-then-tag pipeline.
// Each seed is an independent run; per-seed reports are kept next to means.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eca/eval.hpp"
#include "eca/synthetic.hpp"

namespace eca {

enum class ExperimentKind : std::uint8_t { Ablation, ContextScope, EventErrorPropagation, FullPipeline };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Ablation;
  std::vector<std::uint64_t> seeds;  // non-empty
  /// Either a synthetic corpus (regenerated per seed) or a corpus file with a
  /// prebuilt graph.
  std::optional<SyntheticParams> synthetic;
  std::filesystem::path corpus_path;
  std::filesystem::path graph_path;
  Scope scope = Scope::Document;
  std::size_t paragraph_len = 4;
  std::size_t token_budget = 512;
  std::size_t epochs = 10;
  double corruption_rate = 0.3;  // share of test event labels replaced
  MatchMode mode = MatchMode::ExactSpan;
  Split eval_split = Split::Test;
  bool parallel = true;
};

/// Relative paths resolve against `base_dir`. Unknown keys are rejected.
ExperimentConfig parse_experiment_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct SystemResult {
  std::string system;
  std::vector<EvalReport> per_seed;
  std::vector<double> causal_f1_per_seed;  // pooled Reason + AfterEffect F1
  EvalReport mean;                         // per-type P/R/F1 averaged, counts summed
  double causal_f1_mean = 0.0;
};

struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::Ablation;
  std::vector<std::uint64_t> seeds;
  std::vector<SystemResult> systems;
  /// Event classifier micro F1 per seed on the evaluation split; before
  /// corruption for error propagation. Empty when no classifier is trained.
  std::vector<double> event_f1_per_seed;

  const SystemResult& system(std::string_view name) const;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentResult& result);
std::string format_result(const ExperimentResult& result);

}  // namespace eca
