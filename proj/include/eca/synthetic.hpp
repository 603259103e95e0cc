#pragma once

// Seeded synthetic corpus with a gold causal graph, for desk-scale
// experiments. Each event gets its own cue vocabulary (titles name the event),
// a gold causal graph, and documents in which Reason / AfterEffect spans are
// drawn from that graph; entity-type arguments are mentioned twice per
// document, and non-argument mentions of the same shapes appear in sentences
// without an event cue.

#include <cstdint>

#include "eca/causal_graph.hpp"
#include "eca/corpus.hpp"

namespace eca {

struct SyntheticParams {
  std::size_t n_events = 12;
  std::size_t docs_per_event = 50;
  std::size_t sentences_per_doc = 15;
  double vocab_overlap = 0.2;       // share of each event's cue vocabulary drawn from a common pool
  double causal_span_rate = 0.8;    // share of causal spans copied from gold-graph phrases
  double displacement_rate = 0.2;   // share of argument mentions placed in cue-less sentences
  double confounder_rate = 0.7;     // chance a cue-less sentence carries a non-argument mention
};

struct SyntheticCorpus {
  Corpus corpus;
  CausalGraph graph;
};

/// Throws ConfigError on out-of-range parameters.
SyntheticCorpus generate_synthetic_corpus(std::uint64_t seed, const SyntheticParams& params = {});

}  // namespace eca
