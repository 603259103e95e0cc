#include <gtest/gtest.h>

#include <atomic>

#include <nlohmann/json.hpp>

#include "eca/causal_graph.hpp"
#include "eca/error.hpp"
#include "eca/kb.hpp"
#include "test_support.hpp"

using namespace eca;

namespace {

KbClient fixture_client() {
  KbConfig cfg;
  cfg.fixture_dir = testing_support::data_dir() / "fixtures" / "kb";
  return KbClient(cfg);
}

std::vector<std::string> texts(const std::vector<KbPhrase>& v) {
  std::vector<std::string> out;
  for (const auto& p : v) out.push_back(p.text);
  return out;
}

}  // namespace

TEST(ConceptNet, FloodFixtureByDirection) {
  auto kb = fixture_client();
  EXPECT_EQ(texts(kb.conceptnet_causal("flood", CausalRole::Reason, 10)), (std::vector<std::string>{"rain"}));
  EXPECT_EQ(texts(kb.conceptnet_causal("flood", CausalRole::AfterEffect, 10)), (std::vector<std::string>{"damage"}));
}

TEST(ConceptNet, MissingFixtureIsEmpty) {
  auto kb = fixture_client();
  EXPECT_TRUE(kb.conceptnet_causal("no such concept", CausalRole::Reason, 10).empty());
}

TEST(ConceptNet, FiltersLanguageAndLength) {
  auto kb = fixture_client();
  // flooding: a French source and an 11-token phrase are dropped
  const auto reasons = texts(kb.conceptnet_causal("flooding", CausalRole::Reason, 10));
  EXPECT_EQ(reasons, (std::vector<std::string>{"heavy rain", "dam failure", "snowmelt"}));
  const auto effects = texts(kb.conceptnet_causal("flooding", CausalRole::AfterEffect, 10));
  EXPECT_EQ(effects, (std::vector<std::string>{"property damage", "crop loss", "displacement"}));
}

TEST(ConceptNet, SortedLimitedDeduplicated) {
  const auto dir = testing_support::scratch_dir("kb-dedup");
  KbConfig cfg;
  cfg.fixture_dir = dir;
  KbClient kb(cfg);
  auto edge = [](const std::string& start, const std::string& end, double w) {
    return nlohmann::json{{"start", {{"@id", "/c/en/" + start}, {"label", start}}},
                          {"end", {{"@id", "/c/en/" + end}, {"label", end}}},
                          {"rel", {{"@id", "/r/Causes"}}},
                          {"weight", w}};
  };
  nlohmann::json body{{"edges",
                       {edge("rain", "storm", 1.0), edge("Rain", "storm", 3.0), edge("wind", "storm", 2.0),
                        edge("heat", "storm", 0.5), edge("storm", "damage", 9.0)}}};
  write_file_atomic(kb.fixture_path(KbClient::conceptnet_request("storm", "Causes", 50)), body.dump());
  const auto out = kb.conceptnet_causal("storm", CausalRole::Reason, 2);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].text, "Rain");
  EXPECT_EQ(out[0].weight, 3.0);
  EXPECT_EQ(out[1].text, "wind");
  const auto all = kb.conceptnet_causal("storm", CausalRole::Reason, 10);
  EXPECT_EQ(texts(all), (std::vector<std::string>{"Rain", "wind", "heat"}));
}

TEST(ConceptNet, MotivatedByGoalIsAReason) {
  auto kb = fixture_client();
  const auto reasons = texts(kb.conceptnet_causal("fire", CausalRole::Reason, 10));
  EXPECT_NE(std::find(reasons.begin(), reasons.end(), "warmth"), reasons.end());
  const auto effects = texts(kb.conceptnet_causal("fire", CausalRole::AfterEffect, 10));
  EXPECT_EQ(std::find(effects.begin(), effects.end(), "warmth"), effects.end());
}

TEST(ConceptNet, TermNormalization) {
  EXPECT_EQ(conceptnet_term("Heavy  Rain"), "heavy_rain");
  EXPECT_EQ(KbClient::conceptnet_request("Volcanic eruption", "Causes", 50),
            "conceptnet /query?node=/c/en/volcanic_eruption&rel=/r/Causes&limit=50");
}

TEST(Wikipedia, CausesAndImpactSections) {
  auto kb = fixture_client();
  const auto m = kb.wikipedia_causal_sections("Tropical cyclone");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_NE(m.at(CausalRole::Reason).find("warm ocean water"), std::string::npos);
  EXPECT_NE(m.at(CausalRole::AfterEffect).find("Storm surge"), std::string::npos);
}

TEST(Wikipedia, OnlyHistoryGivesEmptyMap) {
  auto kb = fixture_client();
  EXPECT_TRUE(kb.wikipedia_causal_sections("Avalanche").empty());
}

TEST(Wikipedia, MissingPageGivesEmptyMap) {
  auto kb = fixture_client();
  EXPECT_TRUE(kb.wikipedia_causal_sections("Landslide").empty());
  EXPECT_TRUE(kb.wikipedia_causal_sections("Never Authored").empty());
}

TEST(Wikipedia, HeadingsAreCaseInsensitiveAndSubsectionsIncluded) {
  const auto dir = testing_support::scratch_dir("kb-wiki");
  KbConfig cfg;
  cfg.fixture_dir = dir;
  KbClient kb(cfg);
  const std::string text =
      "Intro.\n== EFFECTS ==\nRoads '''closed'''.<ref>x</ref>\n=== Local ===\nSee [[Main Street|the main street]].\n"
      "== Causes ==\nA {{nowrap|template}}[[File:x.jpg|thumb|cap]]storm.\n== See also ==\nNothing.\n";
  nlohmann::json body{{"parse", {{"title", "T"}, {"wikitext", text}}}};
  write_file_atomic(kb.fixture_path(KbClient::wikipedia_request("T")), body.dump());
  const auto m = kb.wikipedia_causal_sections("T");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.at(CausalRole::AfterEffect), "Roads closed.\nSee the main street.");
  EXPECT_EQ(m.at(CausalRole::Reason), "A storm.");
}

TEST(Wikipedia, HeadingRoles) {
  EXPECT_EQ(heading_role("Causes"), CausalRole::Reason);
  EXPECT_EQ(heading_role(" cause "), CausalRole::Reason);
  EXPECT_EQ(heading_role("Aftermath"), CausalRole::AfterEffect);
  EXPECT_EQ(heading_role("Consequences"), CausalRole::AfterEffect);
  EXPECT_EQ(heading_role("History"), std::nullopt);
}

TEST(Wikipedia, StripWikitext) {
  EXPECT_EQ(strip_wikitext("<!-- c -->a [[b|c]] [https://x.org d] ''e'' <b>f</b>&nbsp;g"), "a c d e f g");
  EXPECT_EQ(strip_wikitext("{{a|{{b}}}}x\n{| t\n| y\n|}\nz"), "x\nz");
  EXPECT_EQ(strip_wikitext("* one\n* two"), "one\ntwo");
}

TEST(Resources, MergedTypesShareRecord) {
  const auto graph = load_ontology(testing_support::data_dir() / "ontology.json");
  const auto reg = graph.registry();
  const auto& a = resolve_resources("Transport Hazard", reg);
  const auto& b = resolve_resources("Vehicular Collision", reg);
  EXPECT_EQ(&a, &b);
  const auto& flood = resolve_resources("Flood", reg);
  EXPECT_NE(std::find(flood.query_terms.begin(), flood.query_terms.end(), "flood"), flood.query_terms.end());
  try {
    resolve_resources("UnknownEvent", reg);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("Flood"), std::string::npos);
  }
}

TEST(Live, RetriesRetryableErrorsThenSucceeds) {
  KbConfig cfg;
  cfg.mode = KbMode::Live;
  cfg.rate_limit_rps = 1000;
  cfg.initial_backoff = std::chrono::milliseconds(1);
  std::atomic<int> calls = 0;
  std::string seen_url;
  KbClient kb(cfg, [&](const std::string& url) -> std::string {
    seen_url = url;
    if (++calls < 3) throw KbError("503", true);
    return R"({"edges":[{"start":{"@id":"/c/en/rain","label":"rain"},"end":{"@id":"/c/en/flood","label":"flood"},"rel":{"@id":"/r/Causes"},"weight":2.0}]})";
  });
  const auto r = kb.conceptnet_causal("flood", CausalRole::Reason, 5);
  EXPECT_GE(calls.load(), 3);
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r[0].text, "rain");
  EXPECT_EQ(seen_url.rfind("https://api.conceptnet.io/query?node=", 0), 0u);
}

TEST(Live, GivesUpAfterMaxRetries) {
  KbConfig cfg;
  cfg.mode = KbMode::Live;
  cfg.rate_limit_rps = 1000;
  cfg.max_retries = 2;
  cfg.initial_backoff = std::chrono::milliseconds(1);
  int calls = 0;
  KbClient kb(cfg, [&](const std::string&) -> std::string {
    ++calls;
    throw KbError("timeout", true);
  });
  try {
    kb.wikipedia_causal_sections("Flood");
    FAIL();
  } catch (const KbError& e) {
    EXPECT_TRUE(e.retryable());
  }
  EXPECT_EQ(calls, 3);  // first try plus two retries
}

TEST(Live, NonRetryableFailsImmediately) {
  KbConfig cfg;
  cfg.mode = KbMode::Live;
  cfg.rate_limit_rps = 1000;
  int calls = 0;
  KbClient kb(cfg, [&](const std::string&) -> std::string {
    ++calls;
    throw KbError("404", false);
  });
  EXPECT_THROW(kb.wikipedia_causal_sections("Flood"), KbError);
  EXPECT_EQ(calls, 1);
}

TEST(Live, RateLimitSpacesRequests) {
  KbConfig cfg;
  cfg.mode = KbMode::Live;
  cfg.rate_limit_rps = 50;  // 20 ms apart
  KbClient kb(cfg, [](const std::string&) { return std::string(R"({"edges":[]})"); });
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 3; ++i) kb.conceptnet_causal("x", CausalRole::Reason, 5);  // 2 requests each
  const auto elapsed = std::chrono::steady_clock::now() - t0;
  EXPECT_GE(elapsed, std::chrono::milliseconds(90));
}
