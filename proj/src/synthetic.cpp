#include "eca/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "eca/error.hpp"
#include "eca/util.hpp"

namespace eca {

namespace {

const std::vector<std::string> kEventNames = {"Flood",     "Earthquake", "Landslide",           "Avalanche",
                                              "Cyclone",   "Drought",    "Fire",                "Volcano",
                                              "Epidemic",  "Industrial Accident", "Transport Hazard", "Terrorist Attack"};

const std::vector<std::string> kFiller = {
    "the",      "officials", "said",    "reported", "local",    "area",     "residents", "government", "week",
    "news",     "according", "sources", "situation", "team",    "work",     "continued", "monitoring", "district",
    "state",    "statement", "later",   "also",      "has",     "been",     "were",      "was",        "is",
    "that",     "a",         "of",      "and",       "for",     "from",     "this",      "early",      "nearby",
    "authority", "update",   "press",   "channel",   "visited", "meeting",  "remained",  "region"};

const std::vector<std::vector<std::string>> kReasonConnectives = {
    {"due", "to"}, {"because", "of"}, {"caused", "by"}, {"triggered", "by"}, {"following"}};
const std::vector<std::vector<std::string>> kEffectConnectives = {
    {"causing"}, {"leading", "to"}, {"resulting", "in"}, {"which", "brought"}, {"leaving"}};

const std::vector<std::string> kDays = {"Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"};
const std::vector<std::string> kMonths = {"January", "February", "March", "April",   "May",      "June",
                                          "July",    "August",   "September", "October", "November", "December"};
const std::vector<std::vector<std::string>> kParticipants = {
    {"villagers"}, {"the", "army"}, {"rescue", "workers"}, {"a", "truck"},   {"fishermen"},    {"tourists"},
    {"students"},  {"a", "bus"},   {"the", "police"},     {"farmers"},      {"firefighters"}, {"a", "ferry"},
    {"pilgrims"},  {"miners"},     {"volunteers"},        {"a", "train"}};
const std::vector<std::string> kCasualtyNouns = {"people", "workers", "children", "passengers", "residents"};
const std::vector<std::string> kNumberWords = {"two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"};

class PseudoWords {
 public:
  explicit PseudoWords(Rng& rng) : rng_(rng) {
    for (const auto& w : kFiller) used_.insert(w);
  }

  std::string fresh(std::size_t syllables) {
    static const std::string kCons = "bdfgklmnprstvz";
    static const std::string kVow = "aeiou";
    for (;;) {
      std::string w;
      for (std::size_t i = 0; i < syllables; ++i) {
        w.push_back(kCons[rng_.index(kCons.size())]);
        w.push_back(kVow[rng_.index(kVow.size())]);
      }
      if (rng_.bernoulli(0.3)) w.push_back(kCons[rng_.index(kCons.size())]);
      if (used_.insert(w).second) return w;
    }
  }

  std::vector<std::string> phrase(std::size_t min_len, std::size_t max_len) {
    const std::size_t len = min_len + rng_.index(max_len - min_len + 1);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < len; ++i) out.push_back(fresh(2 + rng_.index(2)));
    return out;
  }

 private:
  Rng& rng_;
  std::set<std::string> used_;
};

std::string capitalise(std::string w) {
  if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

struct EventSpec {
  std::string name;
  std::vector<std::string> cue_words;       // title vocabulary (specific + shared)
  std::vector<std::string> specific_words;  // event-only cue words
  std::vector<std::vector<std::string>> reasons, effects;
};

// One clause carrying (optionally) a span: prefix ++ value ++ suffix.
struct Clause {
  std::vector<std::string> prefix;
  std::vector<std::string> value;
  std::vector<std::string> suffix;
  std::optional<ArgumentType> type;  // set when the value is an argument
};

struct EntityValues {
  std::vector<std::string> time, place, participant, casualties;
};

}  // namespace

SyntheticCorpus generate_synthetic_corpus(std::uint64_t seed, const SyntheticParams& p) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (p.n_events == 0 || p.docs_per_event == 0 || p.sentences_per_doc == 0) {
    throw ConfigError("synthetic corpus: counts must be positive");
  }
  if (!in_unit(p.vocab_overlap) || !in_unit(p.causal_span_rate) || !in_unit(p.displacement_rate) ||
      !in_unit(p.confounder_rate)) {
    throw ConfigError("synthetic corpus: rates must lie in [0, 1]");
  }

  Rng rng(seed);
  PseudoWords words(rng);

  // vocabularies and gold graph
  constexpr std::size_t kCueVocab = 10;
  constexpr std::size_t kPhrasesPerRole = 6;
  std::vector<std::string> shared;
  for (std::size_t i = 0; i < kCueVocab; ++i) shared.push_back(words.fresh(2));
  std::vector<std::string> places;
  for (std::size_t i = 0; i < 40; ++i) places.push_back(capitalise(words.fresh(3)));

  const auto n_shared = static_cast<std::size_t>(std::llround(p.vocab_overlap * kCueVocab));
  std::vector<EventSpec> events;
  SyntheticCorpus out;
  for (std::size_t e = 0; e < p.n_events; ++e) {
    EventSpec spec;
    spec.name = e < kEventNames.size() ? kEventNames[e] : "Event " + std::to_string(e + 1);
    for (std::size_t i = 0; i < kCueVocab - n_shared; ++i) spec.specific_words.push_back(words.fresh(3));
    spec.cue_words = spec.specific_words;
    std::vector<std::string> pool = shared;
    rng.shuffle(pool);
    spec.cue_words.insert(spec.cue_words.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_shared));
    for (std::size_t i = 0; i < kPhrasesPerRole; ++i) spec.reasons.push_back(words.phrase(1, 3));
    for (std::size_t i = 0; i < kPhrasesPerRole; ++i) spec.effects.push_back(words.phrase(1, 3));

    EventResource r;
    r.event_type = spec.name;
    r.query_terms.push_back(to_lower(spec.name));
    r.query_terms.insert(r.query_terms.end(), spec.specific_words.begin(), spec.specific_words.end());
    out.graph.add_event(r);
    auto& node = out.graph.event(spec.name);
    for (const auto& ph : spec.reasons) node.reason.phrases.push_back(join(ph, " "));
    for (const auto& ph : spec.effects) node.after_effect.phrases.push_back(join(ph, " "));
    events.push_back(std::move(spec));
  }
  for (std::size_t e = 0; e + 1 < p.n_events; e += 2) out.graph.add_relation(events[e].name, events[e + 1].name);

  auto random_entities = [&]() {
    EntityValues v;
    if (rng.bernoulli(0.5)) {
      v.time = {rng.pick(kDays)};
      if (rng.bernoulli(0.4)) v.time.push_back(rng.bernoulli(0.5) ? "morning" : "night");
    } else {
      v.time = {rng.pick(kMonths), std::to_string(1 + rng.index(28))};
    }
    v.place = {rng.pick(places)};
    if (rng.bernoulli(0.3)) v.place.push_back("district");
    v.participant = rng.pick(kParticipants);
    v.casualties = {rng.bernoulli(0.5) ? std::to_string(2 + rng.index(98)) : rng.pick(kNumberWords),
                    rng.pick(kCasualtyNouns)};
    return v;
  };
  auto entity_clause = [&](ArgumentType type, const EntityValues& v, bool is_arg) {
    Clause c;
    switch (type) {
      case ArgumentType::Time:
        c.prefix = {"on"};
        c.value = v.time;
        break;
      case ArgumentType::Place:
        c.prefix = {rng.bernoulli(0.5) ? "in" : "near"};
        c.value = v.place;
        break;
      case ArgumentType::Participant:
        c.prefix = {rng.bernoulli(0.5) ? "involving" : "with"};
        c.value = v.participant;
        break;
      default:
        c.value = v.casualties;
        c.suffix = rng.bernoulli(0.5) ? std::vector<std::string>{"died"} : std::vector<std::string>{"were", "hurt"};
        break;
    }
    if (is_arg) c.type = type;
    return c;
  };
  auto causal_clause = [&](ArgumentType type, std::vector<std::string> phrase, bool is_arg) {
    Clause c;
    c.prefix = type == ArgumentType::Reason ? rng.pick(kReasonConnectives) : rng.pick(kEffectConnectives);
    c.value = std::move(phrase);
    if (is_arg) c.type = type;
    return c;
  };
  auto filler = [&](std::size_t lo, std::size_t hi) {
    std::vector<std::string> f;
    const std::size_t n = lo + rng.index(hi - lo + 1);
    for (std::size_t i = 0; i < n; ++i) f.push_back(rng.pick(kFiller));
    return f;
  };

  const std::size_t n_sent = p.sentences_per_doc;
  const std::size_t n_title = std::min<std::size_t>(2, n_sent);

  for (std::size_t e = 0; e < p.n_events; ++e) {
    const EventSpec& spec = events[e];
    std::vector<Document> docs;
    for (std::size_t d = 0; d < p.docs_per_event; ++d) {
      // cue sentences: the title plus roughly half of the body
      std::vector<bool> cue(n_sent, false);
      for (std::size_t s = 0; s < n_sent; ++s) cue[s] = s < n_title || rng.bernoulli(0.5);
      // arguments live in the body; titles carry them only when there is no body
      std::vector<std::size_t> cue_ids, plain_ids;
      for (std::size_t s = n_title; s < n_sent; ++s) (cue[s] ? cue_ids : plain_ids).push_back(s);
      if (cue_ids.empty()) {
        for (std::size_t s = 0; s < n_title; ++s) cue_ids.push_back(s);
      }

      std::vector<std::vector<Clause>> clauses(n_sent);
      auto place_clause = [&](Clause c, std::optional<std::size_t> avoid) {
        const bool displaced = rng.bernoulli(p.displacement_rate) && !plain_ids.empty();
        const auto& ids = displaced ? plain_ids : cue_ids;
        std::size_t s = ids[rng.index(ids.size())];
        if (avoid && s == *avoid && ids.size() > 1) {
          while (s == *avoid) s = ids[rng.index(ids.size())];
        }
        clauses[s].push_back(std::move(c));
        return s;
      };

      const EntityValues mine = random_entities();
      for (ArgumentType t : {ArgumentType::Time, ArgumentType::Place, ArgumentType::Casualties, ArgumentType::Participant}) {
        // two mentions of the same value, in different sentences where possible
        const std::size_t first = place_clause(entity_clause(t, mine, true), std::nullopt);
        place_clause(entity_clause(t, mine, true), first);
      }
      for (ArgumentType t : {ArgumentType::Reason, ArgumentType::AfterEffect}) {
        const std::size_t mentions = 1 + rng.index(2);
        const auto& gold = t == ArgumentType::Reason ? spec.reasons : spec.effects;
        for (std::size_t m = 0; m < mentions; ++m) {
          auto phrase = rng.bernoulli(p.causal_span_rate) ? rng.pick(gold) : words.phrase(1, 3);
          place_clause(causal_clause(t, std::move(phrase), true), std::nullopt);
        }
      }
      // non-argument mentions in cue-less sentences
      for (std::size_t s : plain_ids) {
        if (!rng.bernoulli(p.confounder_rate)) continue;
        const ArgumentType t = kArgumentTypes[rng.index(kArgumentTypes.size())];
        if (t == ArgumentType::Reason || t == ArgumentType::AfterEffect) {
          const std::size_t other = p.n_events > 1 ? (e + 1 + rng.index(p.n_events - 1)) % p.n_events : e;
          const auto& pool = t == ArgumentType::Reason ? events[other].reasons : events[other].effects;
          auto phrase = other == e ? words.phrase(1, 3) : rng.pick(pool);
          clauses[s].push_back(causal_clause(t, std::move(phrase), false));
        } else {
          EntityValues v = random_entities();
          while (v.time == mine.time) v.time = random_entities().time;
          while (v.place == mine.place) v.place = random_entities().place;
          while (v.participant == mine.participant) v.participant = random_entities().participant;
          while (v.casualties == mine.casualties) v.casualties = random_entities().casualties;
          clauses[s].push_back(entity_clause(t, v, false));
        }
      }

      Document doc;
      char id[32];
      std::snprintf(id, sizeof id, "syn-%02zu-%03zu", e, d);
      doc.doc_id = id;
      doc.language = "en";
      doc.event_type = spec.name;
      for (std::size_t s = 0; s < n_sent; ++s) {
        Sentence sent;
        auto append = [&](const std::vector<std::string>& toks) {
          sent.tokens.insert(sent.tokens.end(), toks.begin(), toks.end());
        };
        if (s < n_title) {
          // titles name the event through its cue vocabulary
          append(filler(0, 2));
          const std::size_t at = sent.tokens.size();
          sent.tokens.push_back(rng.pick(spec.cue_words));
          if (s == 0) sent.triggers.push_back({at, at + 1, spec.name});
          append(filler(1, 2));
          sent.tokens.push_back(rng.pick(spec.cue_words));
        } else if (cue[s]) {
          append(filler(1, 3));
          sent.tokens.push_back(rng.bernoulli(0.3) ? to_lower(spec.name) : rng.pick(spec.specific_words));
        } else {
          append(filler(2, 4));
        }
        auto& cs = clauses[s];
        rng.shuffle(cs);
        for (const auto& c : cs) {
          append(filler(0, 2));
          append(c.prefix);
          const std::size_t start = sent.tokens.size();
          append(c.value);
          if (c.type) sent.spans.push_back({*c.type, start, sent.tokens.size()});
          append(c.suffix);
        }
        append(filler(0, 2));
        sent.tokens.push_back(".");
        doc.sentences.push_back(std::move(sent));
      }
      docs.push_back(std::move(doc));
    }
    // per-event split: 70% train, 10% valid, rest test
    std::vector<std::size_t> order(docs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    const std::size_t n_train = (docs.size() * 7) / 10;
    const std::size_t n_valid = docs.size() / 10;
    for (std::size_t k = 0; k < order.size(); ++k) {
      docs[order[k]].split = k < n_train ? Split::Train : k < n_train + n_valid ? Split::Valid : Split::Test;
    }
    for (auto& d : docs) out.corpus.documents.push_back(std::move(d));
  }
  return out;
}

}  // namespace eca
