#include "eca/causal_graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "eca/error.hpp"
#include "eca/util.hpp"

namespace eca {

void CausalGraph::add_event(EventResource resource) {
  const std::string type = resource.event_type;
  if (type.empty()) throw DataError("ontology: event with empty type");
  if (contains(type)) throw DataError("ontology: duplicate event '" + type + "'");
  for (const auto& alias : resource.merged_with) {
    if (contains(alias) || alias == type) throw DataError("ontology: duplicate event '" + alias + "'");
  }
  for (const auto& alias : resource.merged_with) aliases_[alias] = type;
  EventNode node;
  node.resource = std::move(resource);
  events_.emplace(type, std::move(node));
}

void CausalGraph::add_relation(std::string_view a, std::string_view b) {
  for (auto e : {a, b}) {
    if (!contains(e)) throw DataError("ontology: relation references undeclared event '" + std::string(e) + "'");
  }
  relations_.emplace_back(canonical(a), canonical(b));
}

bool CausalGraph::contains(std::string_view event_type) const {
  return events_.contains(event_type) || aliases_.contains(event_type);
}

const std::string& CausalGraph::canonical(std::string_view event_type) const {
  if (auto it = events_.find(event_type); it != events_.end()) return it->first;
  if (auto it = aliases_.find(event_type); it != aliases_.end()) return it->second;
  throw DataError("unknown event type '" + std::string(event_type) + "'");
}

EventNode& CausalGraph::event(std::string_view event_type) { return events_.find(canonical(event_type))->second; }

const EventNode& CausalGraph::event(std::string_view event_type) const {
  return events_.find(canonical(event_type))->second;
}

std::vector<std::string> CausalGraph::neighbors(std::string_view event_type) const {
  const std::string& self = canonical(event_type);
  std::vector<std::string> out;
  for (const auto& [a, b] : relations_) {
    const std::string* other = a == self ? &b : b == self ? &a : nullptr;
    if (other && *other != self && std::find(out.begin(), out.end(), *other) == out.end()) out.push_back(*other);
  }
  return out;
}

std::vector<EventResource> CausalGraph::registry() const {
  std::vector<EventResource> out;
  for (const auto& [type, node] : events_) out.push_back(node.resource);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> string_list(const nlohmann::json& j, const char* key) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) return it->get<std::vector<std::string>>();
  return {};
}

}  // namespace

CausalGraph parse_ontology(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("ontology: ") + e.what());
  }
  CausalGraph graph;
  const auto events = j.value("events", nlohmann::json::array());
  if (events.empty()) throw DataError("ontology: no events declared");
  for (const auto& e : events) {
    EventResource r;
    r.event_type = e.at("type").get<std::string>();
    r.query_terms = string_list(e, "query_terms");
    r.wikipedia_titles = string_list(e, "wikipedia_titles");
    r.merged_with = string_list(e, "merged_with");
    if (r.query_terms.empty()) throw DataError("ontology: event '" + r.event_type + "' has no query terms");
    graph.add_event(std::move(r));
  }
  for (const auto& rel : j.value("relations", nlohmann::json::array())) {
    if (!rel.is_array() || rel.size() != 2) throw DataError("ontology: relation must be a pair");
    graph.add_relation(rel[0].get<std::string>(), rel[1].get<std::string>());
  }
  return graph;
}

CausalGraph load_ontology(const std::filesystem::path& path) { return parse_ontology(read_file(path)); }

// ---------------------------------------------------------------------------

namespace {

void append_unique(std::vector<std::string>& phrases, std::set<std::string>& seen, const std::string& phrase) {
  if (phrases.size() >= CausalGraph::kMaxPhrases) return;
  const std::string text = trim(phrase);
  if (text.empty()) return;
  if (seen.insert(to_lower(text)).second) phrases.push_back(text);
}

}  // namespace

void populate(CausalGraph& graph, std::string_view event_type, const RolePhrases& kb_results,
              const RoleKeyphrases& wiki_keyphrases) {
  auto& node = graph.event(event_type);
  for (CausalRole role : kCausalRoles) {
    std::vector<KbPhrase> kb;
    if (auto it = kb_results.find(role); it != kb_results.end()) kb = it->second;
    std::stable_sort(kb.begin(), kb.end(), [](const KbPhrase& a, const KbPhrase& b) { return a.weight > b.weight; });
    std::vector<Keyphrase> wiki;
    if (auto it = wiki_keyphrases.find(role); it != wiki_keyphrases.end()) wiki = it->second;
    std::stable_sort(wiki.begin(), wiki.end(), [](const Keyphrase& a, const Keyphrase& b) { return a.score < b.score; });

    RoleNode fresh;
    std::set<std::string> seen;
    for (const auto& p : kb) append_unique(fresh.phrases, seen, p.text);
    for (const auto& p : wiki) append_unique(fresh.phrases, seen, p.text);
    node.role(role) = std::move(fresh);
  }
}

void inherit(CausalGraph& graph) {
  // phrases as they stand before this pass; inheritance reads only these
  std::map<std::string, std::map<CausalRole, std::vector<std::string>>> snapshot;
  for (const auto& [type, node] : graph.events()) {
    for (CausalRole role : kCausalRoles) snapshot[type][role] = node.role(role).phrases;
  }
  for (const auto& [type, _] : snapshot) {
    for (CausalRole role : kCausalRoles) {
      RoleNode& node = graph.event(type).role(role);
      if (node.phrases.size() < CausalGraph::kMinPhrases) {
        std::set<std::string> seen;
        for (const auto& p : node.phrases) seen.insert(to_lower(p));
        std::set<std::string> visited = {type};
        std::deque<std::string> queue;
        for (const auto& n : graph.neighbors(type)) {
          if (visited.insert(n).second) queue.push_back(n);
        }
        while (!queue.empty() && node.phrases.size() < CausalGraph::kMinPhrases) {
          const std::string current = queue.front();
          queue.pop_front();
          for (const auto& p : snapshot[current][role]) {
            if (node.phrases.size() >= CausalGraph::kMinPhrases) break;
            if (seen.insert(to_lower(p)).second) node.phrases.push_back(p);
          }
          for (const auto& n : graph.neighbors(current)) {
            if (visited.insert(n).second) queue.push_back(n);
          }
        }
      }
      node.deficient = node.phrases.size() < CausalGraph::kMinPhrases;
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

std::string replace_placeholder(std::string s, std::string_view key, std::string_view value) {
  std::size_t pos = 0;
  while ((pos = s.find(key, pos)) != std::string::npos) {
    s.replace(pos, key.size(), value);
    pos += value.size();
  }
  return s;
}

}  // namespace

CausalFeature render_causal_feature(const CausalGraph& graph, std::string_view event_type, std::string_view tmpl) {
  const EventNode& node = graph.event(event_type);
  for (CausalRole role : kCausalRoles) {
    if (node.role(role).deficient || node.role(role).phrases.size() < CausalGraph::kMinPhrases) {
      throw DataError("causal node " + std::string(event_type) + "." + std::string(to_string(role)) +
                      " is deficient");
    }
  }
  CausalFeature f;
  f.event_type = std::string(event_type);
  f.reason_phrases = node.reason.phrases;
  f.effect_phrases = node.after_effect.phrases;
  // substitute the lists last so phrase text is never re-scanned for placeholders
  std::string text = replace_placeholder(std::string(tmpl), "{event}", event_type);
  const std::string reasons = join(f.reason_phrases, ", ");
  const std::string effects = join(f.effect_phrases, ", ");
  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    if (text.compare(i, 9, "{reasons}") == 0) {
      out += reasons;
      i += 9;
    } else if (text.compare(i, 9, "{effects}") == 0) {
      out += effects;
      i += 9;
    } else {
      out.push_back(text[i++]);
    }
  }
  f.text = std::move(out);
  return f;
}

// ---------------------------------------------------------------------------

std::string serialize_graph(const CausalGraph& graph) {
  nlohmann::json j;
  j["version"] = graph.version;
  auto events = nlohmann::json::array();
  for (const auto& [type, node] : graph.events()) {
    nlohmann::json e;
    e["type"] = type;
    e["query_terms"] = node.resource.query_terms;
    e["wikipedia_titles"] = node.resource.wikipedia_titles;
    e["merged_with"] = node.resource.merged_with;
    for (CausalRole role : kCausalRoles) {
      e[std::string(to_string(role))] = {{"phrases", node.role(role).phrases},
                                         {"deficient", node.role(role).deficient}};
    }
    events.push_back(std::move(e));
  }
  j["events"] = std::move(events);
  auto relations = nlohmann::json::array();
  for (const auto& [a, b] : graph.relations()) relations.push_back({a, b});
  j["relations"] = std::move(relations);
  return j.dump(2) + "\n";
}

CausalGraph parse_graph(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("graph file: ") + e.what());
  }
  const std::string version = j.value("version", "");
  if (version != CausalGraph::kVersion) {
    throw DataError("graph file: version '" + version + "' does not match '" + std::string(CausalGraph::kVersion) + "'");
  }
  CausalGraph graph;
  try {
    for (const auto& e : j.at("events")) {
      EventResource r;
      r.event_type = e.at("type").get<std::string>();
      r.query_terms = string_list(e, "query_terms");
      r.wikipedia_titles = string_list(e, "wikipedia_titles");
      r.merged_with = string_list(e, "merged_with");
      const std::string type = r.event_type;
      graph.add_event(std::move(r));
      for (CausalRole role : kCausalRoles) {
        const auto& jr = e.at(std::string(to_string(role)));
        auto& node = graph.event(type).role(role);
        node.phrases = jr.at("phrases").get<std::vector<std::string>>();
        node.deficient = jr.at("deficient").get<bool>();
      }
    }
    for (const auto& rel : j.at("relations")) graph.add_relation(rel.at(0).get<std::string>(), rel.at(1).get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("graph file: ") + e.what());
  }
  return graph;
}

void save_graph(const CausalGraph& graph, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_graph(graph));
}

CausalGraph load_graph(const std::filesystem::path& path) { return parse_graph(read_file(path)); }

// ---------------------------------------------------------------------------

CausalGraph build_graph(CausalGraph graph, KbClient& kb, const StopwordRegistry& stopwords,
                        const GraphBuildOptions& options) {
  std::vector<std::string> types;
  for (const auto& [type, _] : graph.events()) types.push_back(type);
  for (const auto& type : types) {
    const EventResource resource = graph.event(type).resource;
    RolePhrases kb_results;
    RoleKeyphrases wiki_results;
    for (CausalRole role : kCausalRoles) {
      auto& merged = kb_results[role];
      for (const auto& term : resource.query_terms) {
        auto found = kb.conceptnet_causal(term, role, options.conceptnet_limit);
        merged.insert(merged.end(), found.begin(), found.end());
      }
    }
    std::map<CausalRole, std::string> wiki_text;
    for (const auto& title : resource.wikipedia_titles) {
      for (auto& [role, text] : kb.wikipedia_causal_sections(title)) {
        if (!wiki_text[role].empty()) wiki_text[role] += "\n";
        wiki_text[role] += text;
      }
    }
    for (const auto& [role, text] : wiki_text) {
      const StopwordSet sw = stopword_profile(text, options.wiki_language, stopwords);
      wiki_results[role] = extract_keyphrases(text, sw, options.keyphrases);
    }
    populate(graph, type, kb_results, wiki_results);
    spdlog::debug("populated {}: {} reason / {} effect phrases", type, graph.event(type).reason.phrases.size(),
                  graph.event(type).after_effect.phrases.size());
  }
  inherit(graph);
  for (const auto& [type, node] : graph.events()) {
    for (CausalRole role : kCausalRoles) {
      if (node.role(role).deficient) spdlog::warn("causal node {}.{} is deficient", type, to_string(role));
    }
  }
  return graph;
}

}  // namespace eca
