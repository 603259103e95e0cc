#pragma once

// Trigger-less document event classification from the document title (its
// first two sentences). The reference backend is an averaged multiclass
// perceptron over unigram and bigram title features.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "eca/corpus.hpp"

namespace eca {

/// Tokens of sentences 0 and 1 with `<sb>` between (sentence 0 alone when the
/// document has one sentence).
std::vector<std::string> title_of(const Document& doc);

/// Lowercased unigram and bigram features of a title.
std::vector<std::string> title_features(std::span<const std::string> title);

struct EventClassifierHyper {
  std::size_t epochs = 10;
  std::uint64_t seed = 1;

  bool operator==(const EventClassifierHyper&) const = default;
};

struct ClassifierModel {
  std::vector<std::string> labels;  // sorted
  /// feature -> weight per label (averaged)
  std::unordered_map<std::string, std::vector<double>> weights;
  EventClassifierHyper hyper;

  bool operator==(const ClassifierModel&) const = default;
};

struct EventPrediction {
  std::string event_type;
  double score = 0.0;  // margin over the runner-up
};

/// Throws DataError listing doc_ids without a derivable event label.
ClassifierModel train_event_classifier(std::span<const Document* const> docs, const EventClassifierHyper& hyper = {});

/// Argmax over labels; ties go to the earlier label in sort order.
EventPrediction predict_event(const ClassifierModel& model, const Document& doc);
EventPrediction predict_title(const ClassifierModel& model, std::span<const std::string> title);

std::string serialize_classifier(const ClassifierModel& model);
ClassifierModel parse_classifier(std::string_view text);

}  // namespace eca
