#include "eca/kb.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "eca/error.hpp"
#include "eca/util.hpp"

namespace eca {

std::string_view to_string(CausalRole role) { return role == CausalRole::Reason ? "Reason" : "AfterEffect"; }

std::string_view to_string(KbMode mode) { return mode == KbMode::Live ? "live" : "fixture"; }

KbMode parse_kb_mode(std::string_view name) {
  if (name == "fixture") return KbMode::Fixture;
  if (name == "live") return KbMode::Live;
  throw ConfigError("unknown kb mode '" + std::string(name) + "' (expected fixture|live)");
}

const EventResource& resolve_resources(std::string_view event_type, std::span<const EventResource> registry) {
  for (const auto& r : registry) {
    if (r.event_type == event_type) return r;
  }
  for (const auto& r : registry) {
    if (std::find(r.merged_with.begin(), r.merged_with.end(), event_type) != r.merged_with.end()) return r;
  }
  std::vector<std::string> known;
  for (const auto& r : registry) {
    known.push_back(r.event_type);
    known.insert(known.end(), r.merged_with.begin(), r.merged_with.end());
  }
  std::sort(known.begin(), known.end());
  throw DataError("unknown event type '" + std::string(event_type) + "'; known: " + join(known, ", "));
}

namespace {

constexpr std::array<CausalRelation, 2> kReasonRelations = {{{"Causes", false}, {"MotivatedByGoal", true}}};
constexpr std::array<CausalRelation, 4> kEffectRelations = {
    {{"Causes", true}, {"HasSubevent", true}, {"HasFirstSubevent", true}, {"HasLastSubevent", true}}};

// Phrases longer than this many tokens are sentences, not node payloads.
constexpr std::size_t kMaxConceptNetPhraseTokens = 6;

bool concept_matches(std::string_view id, std::string_view concept_id) {
  if (id.substr(0, concept_id.size()) != concept_id) return false;
  return id.size() == concept_id.size() || id[concept_id.size()] == '/';
}

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || c == '/') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

}  // namespace

std::span<const CausalRelation> causal_relations(CausalRole role) {
  if (role == CausalRole::Reason) return kReasonRelations;
  return kEffectRelations;
}

std::string conceptnet_term(std::string_view term) {
  std::string out;
  for (const auto& w : split_whitespace(to_lower(term))) {
    if (!out.empty()) out.push_back('_');
    out += w;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Wikitext

namespace {

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  return to_lower(s.substr(0, prefix.size())) == to_lower(prefix);
}

// Index just past the delimiter that closes the construct opened at `pos`,
// counting nesting. Returns npos when unbalanced.
std::size_t match_close(std::string_view s, std::size_t pos, std::string_view open, std::string_view close) {
  int depth = 0;
  std::size_t i = pos;
  while (i < s.size()) {
    if (s.compare(i, open.size(), open) == 0) {
      ++depth;
      i += open.size();
    } else if (s.compare(i, close.size(), close) == 0) {
      --depth;
      i += close.size();
      if (depth == 0) return i;
    } else {
      ++i;
    }
  }
  return std::string_view::npos;
}

std::string strip_link(std::string_view inner) {
  for (std::string_view ns : {"file:", "image:", "category:", "media:"}) {
    if (starts_with_ci(inner, ns)) return "";
  }
  // text after the last top-level pipe
  int depth = 0;
  std::size_t last = std::string_view::npos;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (inner.compare(i, 2, "[[") == 0) ++depth, ++i;
    else if (inner.compare(i, 2, "]]") == 0) --depth, ++i;
    else if (inner[i] == '|' && depth == 0) last = i;
  }
  return std::string(last == std::string_view::npos ? inner : inner.substr(last + 1));
}

std::string remove_html_tags(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '<') {
      std::size_t j = s.find('>', i);
      if (j != std::string_view::npos && j > i + 1 &&
          (std::isalpha(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '/')) {
        i = j + 1;
        continue;
      }
    }
    out.push_back(s[i++]);
  }
  return out;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

}  // namespace

std::string strip_wikitext(std::string_view wikitext) {
  std::string s;
  // comments
  for (std::size_t i = 0; i < wikitext.size();) {
    if (wikitext.compare(i, 4, "<!--") == 0) {
      std::size_t j = wikitext.find("-->", i + 4);
      i = j == std::string_view::npos ? wikitext.size() : j + 3;
    } else {
      s.push_back(wikitext[i++]);
    }
  }
  // references: <ref .../> and <ref ...>...</ref>
  {
    std::string out;
    for (std::size_t i = 0; i < s.size();) {
      if (starts_with_ci(std::string_view(s).substr(i), "<ref")) {
        std::size_t gt = s.find('>', i);
        if (gt == std::string::npos) break;
        if (gt > 0 && s[gt - 1] == '/') {
          i = gt + 1;
          continue;
        }
        std::size_t close = to_lower(s).find("</ref>", gt);
        i = close == std::string::npos ? s.size() : close + 6;
        continue;
      }
      out.push_back(s[i++]);
    }
    s = std::move(out);
  }
  // templates and tables
  for (auto [open, close] : {std::pair<std::string_view, std::string_view>{"{{", "}}"}, {"{|", "|}"}}) {
    std::string out;
    for (std::size_t i = 0; i < s.size();) {
      if (s.compare(i, open.size(), open) == 0) {
        std::size_t end = match_close(s, i, open, close);
        i = end == std::string_view::npos ? s.size() : end;
        continue;
      }
      out.push_back(s[i++]);
    }
    s = std::move(out);
  }
  // wiki links
  {
    std::string out;
    for (std::size_t i = 0; i < s.size();) {
      if (s.compare(i, 2, "[[") == 0) {
        std::size_t end = match_close(s, i, "[[", "]]");
        if (end == std::string_view::npos) {
          i += 2;
          continue;
        }
        out += strip_link(std::string_view(s).substr(i + 2, end - i - 4));
        i = end;
        continue;
      }
      if (s[i] == '[') {
        std::size_t end = s.find(']', i);
        std::string_view inner = std::string_view(s).substr(i + 1, end == std::string::npos ? 0 : end - i - 1);
        if (end != std::string::npos && (starts_with_ci(inner, "http") || starts_with_ci(inner, "//"))) {
          std::size_t sp = inner.find(' ');
          if (sp != std::string_view::npos) out += inner.substr(sp + 1);
          i = end + 1;
          continue;
        }
      }
      out.push_back(s[i++]);
    }
    s = std::move(out);
  }
  s = replace_all(std::move(s), "'''", "");
  s = replace_all(std::move(s), "''", "");
  s = remove_html_tags(s);
  s = replace_all(std::move(s), "&nbsp;", " ");
  s = replace_all(std::move(s), "&ndash;", "-");
  s = replace_all(std::move(s), "&amp;", "&");

  // list markers, whitespace, blank lines
  std::string out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t nl = s.find('\n', pos);
    if (nl == std::string::npos) nl = s.size();
    std::string line = trim(std::string_view(s).substr(pos, nl - pos));
    pos = nl + 1;
    std::size_t b = 0;
    while (b < line.size() && (line[b] == '*' || line[b] == '#' || line[b] == ':' || line[b] == ';')) ++b;
    auto words = split_whitespace(std::string_view(line).substr(b));
    if (words.empty()) continue;
    if (!out.empty()) out.push_back('\n');
    out += join(words, " ");
  }
  return out;
}

std::optional<CausalRole> heading_role(std::string_view heading) {
  const std::string h = to_lower(trim(strip_wikitext(heading)));
  if (h == "cause" || h == "causes") return CausalRole::Reason;
  for (std::string_view e : {"effect", "effects", "impact", "aftermath", "consequences"}) {
    if (h == e) return CausalRole::AfterEffect;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Client

KbClient::KbClient(KbConfig config, HttpGet http) : config_(std::move(config)), http_(std::move(http)) {
  if (!http_) http_ = http_get;
}

std::string KbClient::conceptnet_request(std::string_view term, std::string_view relation, std::size_t limit) {
  return "conceptnet /query?node=/c/en/" + conceptnet_term(term) + "&rel=/r/" + std::string(relation) +
         "&limit=" + std::to_string(limit);
}

std::string KbClient::wikipedia_request(std::string_view title) {
  return "wikipedia action=parse&page=" + std::string(title) + "&prop=sections|wikitext&format=json&formatversion=2";
}

std::filesystem::path KbClient::fixture_path(const std::string& request) const {
  return config_.fixture_dir / (sha256_hex(request) + ".json");
}

void KbClient::throttle() {
  if (config_.rate_limit_rps <= 0) return;
  const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / config_.rate_limit_rps));
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(rate_mutex_);
    const auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_slot_);
    next_slot_ = slot + interval;
  }
  std::this_thread::sleep_until(slot);
}

std::string KbClient::fetch_live(const std::string& url) {
  auto backoff = config_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    throttle();
    try {
      return http_(url);
    } catch (const KbError& e) {
      if (!e.retryable() || attempt >= config_.max_retries) throw;
      spdlog::warn("kb request failed ({}), retry {}/{}: {}", e.what(), attempt + 1, config_.max_retries, url);
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

std::optional<std::string> KbClient::fetch(const std::string& request, const std::string& url) {
  if (config_.mode == KbMode::Live) return fetch_live(url);
  const auto path = fixture_path(request);
  if (!std::filesystem::exists(path)) {
    spdlog::warn("kb fixture miss for '{}' ({})", request, path.filename().string());
    return std::nullopt;
  }
  return read_file(path);
}

std::vector<KbPhrase> KbClient::conceptnet_causal(std::string_view term, CausalRole role, std::size_t limit) {
  if (trim(term).empty()) throw DataError("conceptnet_causal: empty term");
  const std::string concept_id = "/c/en/" + conceptnet_term(term);
  std::vector<KbPhrase> found;
  for (const auto& rel : causal_relations(role)) {
    const std::string request = conceptnet_request(term, rel.name, config_.conceptnet_page_size);
    const std::string url = config_.conceptnet_base + "/query?node=" + url_encode(concept_id) + "&rel=/r/" +
                            std::string(rel.name) + "&limit=" + std::to_string(config_.conceptnet_page_size);
    auto body = fetch(request, url);
    if (!body) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(*body);
    } catch (const nlohmann::json::exception& e) {
      throw KbError("malformed ConceptNet response for " + request + ": " + e.what(), false);
    }
    const std::string rel_id = "/r/" + std::string(rel.name);
    for (const auto& edge : j.value("edges", nlohmann::json::array())) {
      if (edge.at("rel").value("@id", "") != rel_id) continue;
      const auto& event_side = rel.event_is_start ? edge.at("start") : edge.at("end");
      const auto& other_side = rel.event_is_start ? edge.at("end") : edge.at("start");
      if (!concept_matches(event_side.value("@id", ""), concept_id)) continue;
      if (other_side.value("@id", "").rfind("/c/en/", 0) != 0) continue;
      std::string text = trim(other_side.value("label", ""));
      if (text.empty() || split_whitespace(text).size() > kMaxConceptNetPhraseTokens) continue;
      found.push_back({std::move(text), KbSource::ConceptNet, std::max(0.0, edge.value("weight", 1.0))});
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const KbPhrase& a, const KbPhrase& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.text < b.text;
  });
  std::vector<KbPhrase> out;
  std::set<std::string> seen;
  for (auto& p : found) {
    if (out.size() >= limit) break;
    if (seen.insert(to_lower(p.text)).second) out.push_back(std::move(p));
  }
  return out;
}

std::map<CausalRole, std::string> KbClient::wikipedia_causal_sections(std::string_view title) {
  if (trim(title).empty()) throw DataError("wikipedia_causal_sections: empty title");
  const std::string request = wikipedia_request(title);
  const std::string url = config_.wikipedia_base + "?action=parse&page=" + url_encode(title) +
                          "&prop=sections%7Cwikitext&format=json&formatversion=2&redirects=1";
  auto body = fetch(request, url);
  std::map<CausalRole, std::string> out;
  if (!body) return out;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(*body);
  } catch (const nlohmann::json::exception& e) {
    throw KbError("malformed Wikipedia response for " + request + ": " + e.what(), false);
  }
  if (j.contains("error") || !j.contains("parse")) return out;
  const auto& wt = j["parse"]["wikitext"];
  const std::string wikitext = wt.is_string() ? wt.get<std::string>() : wt.value("*", "");

  // Walk the page line by line. A matching heading owns everything up to the
  // next heading of the same or a higher level.
  std::optional<CausalRole> current;
  int current_level = 0;
  std::map<CausalRole, std::string> raw;
  std::size_t pos = 0;
  while (pos < wikitext.size()) {
    std::size_t nl = wikitext.find('\n', pos);
    if (nl == std::string::npos) nl = wikitext.size();
    std::string line = trim(std::string_view(wikitext).substr(pos, nl - pos));
    pos = nl + 1;
    int level = 0;
    while (level < static_cast<int>(line.size()) && line[level] == '=') ++level;
    int tail = 0;
    while (tail < static_cast<int>(line.size()) && line[line.size() - 1 - tail] == '=') ++tail;
    if (level >= 2 && tail >= level && static_cast<int>(line.size()) > 2 * level) {
      std::string heading = line.substr(level, line.size() - 2 * level);
      if (current && level > current_level) continue;  // subsection: keep collecting
      current = heading_role(heading);
      current_level = level;
      continue;
    }
    if (current) {
      raw[*current] += line;
      raw[*current] += '\n';
    }
  }
  for (auto& [role, text] : raw) {
    std::string plain = strip_wikitext(text);
    if (!plain.empty()) out[role] = std::move(plain);
  }
  return out;
}

}  // namespace eca
