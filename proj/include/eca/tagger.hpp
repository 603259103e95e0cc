#pragma once

// Event causality augmentation for argument tagging: each context instance is
// wrapped with the event causal feature on both sides, featurized with
// causal-overlap and event features, and labelled with a linear-chain model
// over BIO labels (averaged structured perceptron, Viterbi decoding).

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eca/causal_graph.hpp"
#include "eca/corpus.hpp"

namespace eca {

inline constexpr std::string_view kAugmentSeparator = "<sep>";

enum class TokenRole : std::uint8_t { Body, Augment };

/// feature ++ <sep> ++ body ++ <sep> ++ feature. back_map is aligned with
/// tokens; it is set only on body positions that map to a sentence token.
struct AugmentedInstance {
  std::vector<std::string> tokens;
  std::vector<TokenRole> mask;
  std::vector<std::optional<TokenRef>> back_map;
  std::vector<std::size_t> sentences;
};

AugmentedInstance augment_instance(const ContextInstance& instance, std::string_view feature_text);
/// Drops every augment position, recovering the original instance.
ContextInstance strip_augmentation(const AugmentedInstance& aug);

/// Which event information the tagger sees.
enum class TaggerVariant : std::uint8_t {
  WithoutEvent,       // no event features, empty feature text
  EventAugmentation,  // event type name as feature text, event conjunctions
  CausalAugmentation  // full causal feature text plus causal-overlap flags
};

std::string_view to_string(TaggerVariant v);
TaggerVariant parse_variant(std::string_view name);

/// Marks every position covered by an occurrence of one of `phrases`
/// (case-insensitive, longest match, scanning left to right): 1 on the first
/// token of an occurrence, 2 on the rest, 0 elsewhere.
std::vector<std::uint8_t> phrase_overlap(std::span<const std::string> tokens, std::span<const std::string> phrases);

/// Feature strings per position; augment positions and `<sb>` get none.
std::vector<std::vector<std::string>> featurize(const AugmentedInstance& aug, std::string_view event_type,
                                                const CausalGraph& graph,
                                                TaggerVariant variant = TaggerVariant::CausalAugmentation);

/// Dense row-major score table.
struct ScoreMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  ScoreMatrix() = default;
  ScoreMatrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

inline constexpr double kForbidden = -std::numeric_limits<double>::infinity();

/// Transition table with the BIO constraint applied: I-k may only follow B-k
/// or I-k. `learned` may be empty (all zero).
ScoreMatrix constrained_transitions(const ScoreMatrix& learned = {});

/// Exact best path under emission + transition scores. Position 0 takes no
/// transition score but may not be an inside label. Among equal-scoring paths
/// the lexicographically smallest label-index sequence wins.
LabelSeq viterbi_decode(const ScoreMatrix& emissions, const ScoreMatrix& transitions);

/// Settings recorded for a future transformer backend; unused by the
/// reference perceptron.
struct NeuralBackendDefaults {
  std::string encoder = "bert-base-multilingual-cased";
  std::size_t batch_size = 4;
  std::size_t max_seq_len = 512;
  std::size_t epochs = 20;
  std::string optimizer = "adam";
};

struct TaggerHyper {
  std::size_t epochs = 10;
  std::uint64_t seed = 1;
  Scope scope = Scope::Document;
  std::size_t paragraph_len = 4;
  std::size_t token_budget = 512;
  TaggerVariant variant = TaggerVariant::CausalAugmentation;
  std::string feature_template = std::string(kDefaultTemplate);
  NeuralBackendDefaults neural;
};

class TaggerModel {
 public:
  static constexpr std::size_t kLabels = Label::kNumContent;

  TaggerModel() : transitions_(kLabels, kLabels) {}
  explicit TaggerModel(TaggerHyper hyper) : hyper_(std::move(hyper)), transitions_(kLabels, kLabels) {}

  const TaggerHyper& hyper() const { return hyper_; }
  std::size_t num_features() const { return names_.size(); }

  /// Learned (finite) transition weights; the constraint is applied at decode.
  const ScoreMatrix& transitions() const { return transitions_; }
  ScoreMatrix& transitions() { return transitions_; }

  std::optional<std::uint32_t> feature_id(std::string_view name) const;
  std::uint32_t intern(const std::string& name);
  const std::string& feature_name(std::uint32_t id) const { return names_[id]; }

  double weight(std::uint32_t feature, std::size_t label) const { return emissions_[feature * kLabels + label]; }
  std::vector<double>& emission_weights() { return emissions_; }
  const std::vector<double>& emission_weights() const { return emissions_; }

  /// Emission table for one featurized instance. Augment and `<sb>` positions
  /// are clamped to O.
  ScoreMatrix emissions(const std::vector<std::vector<std::string>>& features,
                        const std::vector<bool>& clamped) const;

  bool operator==(const TaggerModel& other) const;

 private:
  TaggerHyper hyper_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> names_;
  std::vector<double> emissions_;
  ScoreMatrix transitions_;
};

using EventLabels = std::map<std::string, std::string, std::less<>>;

/// Feature text for a document's event under the given variant. ECA falls
/// back to empty text (with a warning) when the causal node is deficient or
/// the event is not in the graph.
std::string feature_text_for(const CausalGraph& graph, std::string_view event_type, const TaggerHyper& hyper);

/// Context instances for a document, split at sentence boundaries so that
/// every augmented instance fits the token budget where possible.
std::vector<ContextInstance> budgeted_instances(const Document& doc, const TaggerHyper& hyper,
                                                std::size_t feature_tokens);

/// Trains on every document in `docs`. Throws DataError when a document has
/// no entry in `events`.
TaggerModel train_tagger(std::span<const Document* const> docs, const CausalGraph& graph, const EventLabels& events,
                         const TaggerHyper& hyper);

struct PredictedSpan {
  std::size_t sentence = 0;
  ArgumentSpan span;

  auto operator<=>(const PredictedSpan&) const = default;
};

std::vector<PredictedSpan> predict_args(const TaggerModel& model, const Document& doc, std::string_view event_type,
                                        const CausalGraph& graph);

std::string serialize_tagger(const TaggerModel& model);
TaggerModel parse_tagger(std::string_view text);

}  // namespace eca
