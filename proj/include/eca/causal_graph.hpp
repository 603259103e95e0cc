#pragma once

// Disaster event graph: events with Reason / AfterEffect role nodes, undirected
// event-event relations used for inheritance, templating into the event causal
// feature, and canonical serialization.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eca/kb.hpp"
#include "eca/phrases.hpp"

namespace eca {

struct RoleNode {
  std::vector<std::string> phrases;
  bool deficient = false;

  bool operator==(const RoleNode&) const = default;
};

struct EventNode {
  EventResource resource;
  RoleNode reason;
  RoleNode after_effect;

  RoleNode& role(CausalRole r) { return r == CausalRole::Reason ? reason : after_effect; }
  const RoleNode& role(CausalRole r) const { return r == CausalRole::Reason ? reason : after_effect; }

  bool operator==(const EventNode&) const = default;
};

class CausalGraph {
 public:
  static constexpr std::string_view kVersion = "eca-causal-graph/1";
  static constexpr std::size_t kMinPhrases = 3;
  static constexpr std::size_t kMaxPhrases = 10;

  /// Throws DataError on a duplicate type or alias.
  void add_event(EventResource resource);
  /// Throws DataError when either endpoint is undeclared.
  void add_relation(std::string_view a, std::string_view b);

  bool contains(std::string_view event_type) const;
  /// Canonical type for an event or merged alias; throws DataError if unknown.
  const std::string& canonical(std::string_view event_type) const;

  EventNode& event(std::string_view event_type);
  const EventNode& event(std::string_view event_type) const;

  const std::map<std::string, EventNode, std::less<>>& events() const { return events_; }
  /// Relations in declaration order.
  const std::vector<std::pair<std::string, std::string>>& relations() const { return relations_; }
  /// Related events in relation declaration order.
  std::vector<std::string> neighbors(std::string_view event_type) const;
  std::vector<EventResource> registry() const;

  std::string version = std::string(kVersion);

  bool operator==(const CausalGraph&) const = default;

 private:
  std::map<std::string, EventNode, std::less<>> events_;
  std::map<std::string, std::string, std::less<>> aliases_;
  std::vector<std::pair<std::string, std::string>> relations_;
};

/// Ontology JSON: {"events":[{"type","query_terms","wikipedia_titles",
/// "merged_with"?}], "relations":[["A","B"],...]}. Role nodes start empty.
CausalGraph load_ontology(const std::filesystem::path& path);
CausalGraph parse_ontology(std::string_view text);

using RolePhrases = std::map<CausalRole, std::vector<KbPhrase>>;
using RoleKeyphrases = std::map<CausalRole, std::vector<Keyphrase>>;

/// Fills both role nodes of `event_type`: ConceptNet phrases by weight
/// descending, then Wikipedia keyphrases by score ascending, deduplicated
/// case-insensitively, capped at kMaxPhrases.
void populate(CausalGraph& graph, std::string_view event_type, const RolePhrases& kb_results,
              const RoleKeyphrases& wiki_keyphrases);

/// Tops up every role node holding fewer than kMinPhrases with the same role
/// of related events, breadth first from the deficient event. Only appends.
/// Nodes still short after exhausting their component are marked deficient.
void inherit(CausalGraph& graph);

struct CausalFeature {
  std::string event_type;
  std::string text;
  std::vector<std::string> reason_phrases;
  std::vector<std::string> effect_phrases;
};

/// Placeholders: {event}, {reasons}, {effects}. Phrases are joined with ", ".
inline constexpr std::string_view kDefaultTemplate =
    "Reasons of {event} are {reasons} . Effects of {event} are {effects} .";

/// Throws DataError naming the event and role when a node is deficient.
CausalFeature render_causal_feature(const CausalGraph& graph, std::string_view event_type,
                                    std::string_view tmpl = kDefaultTemplate);

std::string serialize_graph(const CausalGraph& graph);
CausalGraph parse_graph(std::string_view text);
void save_graph(const CausalGraph& graph, const std::filesystem::path& path);
CausalGraph load_graph(const std::filesystem::path& path);

struct GraphBuildOptions {
  std::size_t conceptnet_limit = CausalGraph::kMaxPhrases;
  KeyphraseOptions keyphrases;
  std::string wiki_language = "en";
};

/// Queries both knowledge bases for every event (sorted order), populates,
/// then runs inheritance.
CausalGraph build_graph(CausalGraph ontology, KbClient& kb, const StopwordRegistry& stopwords,
                        const GraphBuildOptions& options = {});

}  // namespace eca
