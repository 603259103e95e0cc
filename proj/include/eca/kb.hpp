#pragma once

// ConceptNet and Wikipedia clients with an offline fixture mode, plus
// event-term resolution through synonym lists and merged event types.

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace eca {

enum class CausalRole : std::uint8_t { Reason, AfterEffect };

inline constexpr std::array<CausalRole, 2> kCausalRoles = {CausalRole::Reason, CausalRole::AfterEffect};

std::string_view to_string(CausalRole role);

enum class KbSource : std::uint8_t { ConceptNet, Wikipedia };

struct KbPhrase {
  std::string text;
  KbSource source = KbSource::ConceptNet;
  double weight = 0.0;

  bool operator==(const KbPhrase&) const = default;
};

/// Query material for one event type. Types listed in merged_with resolve to
/// this record.
struct EventResource {
  std::string event_type;
  std::vector<std::string> query_terms;
  std::vector<std::string> wikipedia_titles;
  std::vector<std::string> merged_with;

  bool operator==(const EventResource&) const = default;
};

/// Exact match on event_type or any merged_with alias. Throws DataError
/// listing the known types.
const EventResource& resolve_resources(std::string_view event_type, std::span<const EventResource> registry);

enum class KbMode : std::uint8_t { Fixture, Live };

std::string_view to_string(KbMode mode);
KbMode parse_kb_mode(std::string_view name);

struct KbConfig {
  KbMode mode = KbMode::Fixture;
  std::filesystem::path fixture_dir = "fixtures/kb";
  std::string conceptnet_base = "https://api.conceptnet.io";
  std::string wikipedia_base = "https://en.wikipedia.org/w/api.php";
  double rate_limit_rps = 2.0;
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  /// Edges requested per ConceptNet query, before direction filtering.
  std::size_t conceptnet_page_size = 50;
};

/// Performs one HTTP GET and returns the body; throws KbError on failure.
using HttpGet = std::function<std::string(const std::string& url)>;

// ConceptNet relations consulted for each causal role.
struct CausalRelation {
  std::string_view name;
  bool event_is_start;  // the event concept must be the edge start
};

std::span<const CausalRelation> causal_relations(CausalRole role);

/// Normalizes a term to its ConceptNet URI tail ("Heavy rain" -> "heavy_rain").
std::string conceptnet_term(std::string_view term);

/// Strips wikitext markup to plain text (templates, refs, links, emphasis,
/// tables, comments, html tags).
std::string strip_wikitext(std::string_view wikitext);

/// Maps a section heading onto a causal role, if it names one.
std::optional<CausalRole> heading_role(std::string_view heading);

/// Client for both knowledge bases. Safe for concurrent use: live requests go
/// through one shared rate limiter.
class KbClient {
 public:
  explicit KbClient(KbConfig config, HttpGet http = {});

  const KbConfig& config() const { return config_; }

  /// Phrases linked to `term` by causal edges, oriented for `role`, sorted by
  /// weight descending, deduplicated case-insensitively, at most `limit`.
  std::vector<KbPhrase> conceptnet_causal(std::string_view term, CausalRole role, std::size_t limit);

  /// Plain text of the cause / effect sections of a Wikipedia page. Missing
  /// page or no matching heading yields an empty map.
  std::map<CausalRole, std::string> wikipedia_causal_sections(std::string_view title);

  /// Fixture key material for a request: a base-URL independent string.
  static std::string conceptnet_request(std::string_view term, std::string_view relation, std::size_t limit);
  static std::string wikipedia_request(std::string_view title);
  /// Path of the fixture file answering `request`.
  std::filesystem::path fixture_path(const std::string& request) const;

 private:
  std::optional<std::string> fetch(const std::string& request, const std::string& url);
  std::string fetch_live(const std::string& url);
  void throttle();

  KbConfig config_;
  HttpGet http_;
  std::mutex rate_mutex_;
  std::chrono::steady_clock::time_point next_slot_{};
};

/// Default transport backed by cpp-httplib.
std::string http_get(const std::string& url);

}  // namespace eca
