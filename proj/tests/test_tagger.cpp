#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "eca/causal_graph.hpp"
#include "eca/error.hpp"
#include "eca/eval.hpp"
#include "eca/synthetic.hpp"
#include "eca/tagger.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace eca;
using testing_support::sentence;

namespace {

CausalGraph flood_graph() {
  CausalGraph g = load_ontology(testing_support::data_dir() / "ontology.json");
  for (const auto& [name, node] : g.events()) {
    (void)node;
    auto& e = g.event(name);
    e.reason.phrases = {"storm", "wind", "heat"};
    e.after_effect.phrases = {"ruin", "loss", "harm"};
  }
  auto& flood = g.event("Flood");
  flood.reason.phrases = {"heavy rain", "dam failure", "snowmelt"};
  flood.after_effect.phrases = {"property damage", "crop loss", "displacement"};
  return g;
}

Document flood_doc() {
  Document d;
  d.doc_id = "f1";
  d.event_type = "Flood";
  d.sentences.push_back(sentence("Floods hit the valley"));
  d.sentences.push_back(sentence("heavy rain caused the flood in Dhaka",
                                 {{ArgumentType::Reason, 0, 2}, {ArgumentType::Place, 6, 7}}));
  d.sentences.push_back(sentence("crop loss followed", {{ArgumentType::AfterEffect, 0, 2}}));
  return d;
}

bool has(const std::vector<std::string>& f, const std::string& name) {
  return std::find(f.begin(), f.end(), name) != f.end();
}

}  // namespace

TEST(Augment, EmptyFeatureWrapsBodyInSeparators) {
  const auto doc = flood_doc();
  const auto inst = make_context_instances(doc, Scope::Sentence)[0];
  const auto aug = augment_instance(inst, "");
  ASSERT_EQ(aug.tokens.size(), inst.tokens.size() + 2);
  EXPECT_EQ(aug.tokens.front(), kAugmentSeparator);
  EXPECT_EQ(aug.tokens.back(), kAugmentSeparator);
  EXPECT_EQ(aug.mask.front(), TokenRole::Augment);
  EXPECT_EQ(aug.mask[1], TokenRole::Body);
}

TEST(Augment, LengthAndStripRoundTrip) {
  const auto doc = flood_doc();
  for (const auto& inst : make_context_instances(doc, Scope::Document)) {
    const std::string feature = "Reasons of Flood are heavy rain .";
    const auto aug = augment_instance(inst, feature);
    const std::size_t m = split_whitespace(feature).size();
    EXPECT_EQ(aug.tokens.size(), inst.tokens.size() + 2 * m + 2);
    EXPECT_EQ(aug.mask.size(), aug.tokens.size());
    EXPECT_EQ(aug.back_map.size(), aug.tokens.size());
    const auto back = strip_augmentation(aug);
    EXPECT_EQ(back.tokens, inst.tokens);
    EXPECT_EQ(back.back_map, inst.back_map);
    EXPECT_EQ(back.sentences, inst.sentences);
    for (std::size_t i = 0; i < aug.tokens.size(); ++i) {
      if (aug.mask[i] == TokenRole::Augment) EXPECT_FALSE(aug.back_map[i].has_value());
    }
  }
}

TEST(Featurize, CausalOverlapFlagsMatchingEvent) {
  const auto g = flood_graph();
  const auto doc = flood_doc();
  const auto inst = make_instance(doc, std::vector<std::size_t>{1});
  const auto aug = augment_instance(inst, "");
  const auto f = featurize(aug, "Flood", g);
  // position 0 is the leading separator
  EXPECT_TRUE(has(f[1], "IN-REASON-PHRASE"));
  EXPECT_TRUE(has(f[2], "IN-REASON-PHRASE"));
  EXPECT_FALSE(has(f[3], "IN-REASON-PHRASE"));
  EXPECT_TRUE(has(f[1], "sb=0"));
  EXPECT_TRUE(f[0].empty());

  const auto other = featurize(aug, "Earthquake", g);
  EXPECT_FALSE(has(other[1], "IN-REASON-PHRASE"));
}

TEST(Featurize, VariantsGateEventFeatures) {
  const auto g = flood_graph();
  const auto doc = flood_doc();
  const auto aug = augment_instance(make_instance(doc, std::vector<std::size_t>{1}), "");
  const auto plain = featurize(aug, "Flood", g, TaggerVariant::WithoutEvent);
  const auto ea = featurize(aug, "Flood", g, TaggerVariant::EventAugmentation);
  EXPECT_FALSE(has(plain[1], "ev=Flood"));
  EXPECT_TRUE(has(ea[1], "ev=Flood"));
  EXPECT_FALSE(has(ea[1], "IN-REASON-PHRASE"));
}

TEST(Featurize, SentenceBoundaryHasNoFeatures) {
  const auto g = flood_graph();
  const auto doc = flood_doc();
  const auto aug = augment_instance(make_context_instances(doc, Scope::Document)[0], "");
  const auto f = featurize(aug, "Flood", g);
  for (std::size_t i = 0; i < aug.tokens.size(); ++i) {
    if (aug.tokens[i] == kSentenceBoundary) EXPECT_TRUE(f[i].empty());
  }
}

TEST(PhraseOverlap, LongestMatchCaseInsensitive) {
  const std::vector<std::string> toks = {"Heavy", "rain", "and", "rain"};
  const std::vector<std::string> phrases = {"rain", "heavy rain"};
  EXPECT_EQ(phrase_overlap(toks, phrases), (std::vector<std::uint8_t>{1, 2, 0, 1}));
}

TEST(Viterbi, SinglePositionPicksArgmaxAmongNonInside) {
  ScoreMatrix em(1, Label::kNumContent, 0.0);
  em(0, Label::inside(ArgumentType::Time).index()) = 9.0;
  em(0, Label::begin(ArgumentType::Place).index()) = 2.0;
  const auto path = viterbi_decode(em, constrained_transitions());
  ASSERT_EQ(path.size(), 1u);
  EXPECT_EQ(path[0], Label::begin(ArgumentType::Place));
}

TEST(Viterbi, TiesGoToSmallestSequence) {
  ScoreMatrix em(3, Label::kNumContent, 0.0);
  const auto path = viterbi_decode(em, constrained_transitions());
  for (const auto& l : path) EXPECT_TRUE(l.is_outside());
}

TEST(Viterbi, InsideAtStartIsForbidden) {
  ScoreMatrix em(2, Label::kNumContent, 0.0);
  em(0, Label::inside(ArgumentType::Time).index()) = 100.0;
  em(1, Label::inside(ArgumentType::Time).index()) = 100.0;
  const auto path = viterbi_decode(em, constrained_transitions());
  EXPECT_FALSE(path[0].is_inside());
  EXPECT_EQ(path[0], Label::begin(ArgumentType::Time));
  EXPECT_EQ(path[1], Label::inside(ArgumentType::Time));
}

TEST(Viterbi, MatchesBruteForce) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> small(-2, 2);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    ScoreMatrix em(n, Label::kNumContent);
    ScoreMatrix learned(Label::kNumContent, Label::kNumContent);
    // small integers make ties common
    for (auto& x : em.data) x = small(gen);
    for (auto& x : learned.data) x = small(gen);
    const auto tr = constrained_transitions(learned);
    const auto got = viterbi_decode(em, tr);
    const auto want = oracle::best_path(em, tr);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(got[i].index(), want[i]) << "trial " << trial;
  }
}

namespace {

struct Fixture {
  SyntheticCorpus syn;
  EventLabels gold_events;
  std::vector<const Document*> train;
};

Fixture small_synthetic() {
  Fixture f;
  f.syn = generate_synthetic_corpus(5, {4, 12, 8, 0.2, 0.8, 0.2, 0.7});
  for (const auto& d : f.syn.corpus.documents) f.gold_events[d.doc_id] = *d.event_type;
  f.train = f.syn.corpus.in_split(Split::Train);
  return f;
}

}  // namespace

TEST(Training, ZeroEpochsPredictsNothing) {
  const auto f = small_synthetic();
  TaggerHyper h;
  h.epochs = 0;
  const auto model = train_tagger(f.train, f.syn.graph, f.gold_events, h);
  for (double w : model.emission_weights()) EXPECT_EQ(w, 0.0);
  const Document& d = *f.train.front();
  EXPECT_TRUE(predict_args(model, d, *d.event_type, f.syn.graph).empty());
}

TEST(Training, Deterministic) {
  const auto f = small_synthetic();
  TaggerHyper h;
  h.epochs = 3;
  const auto a = train_tagger(f.train, f.syn.graph, f.gold_events, h);
  const auto b = train_tagger(f.train, f.syn.graph, f.gold_events, h);
  EXPECT_EQ(serialize_tagger(a), serialize_tagger(b));
}

TEST(Training, FitsCausalSpansOnTrainingData) {
  const auto f = small_synthetic();
  TaggerHyper h;
  h.epochs = 20;
  const auto model = train_tagger(f.train, f.syn.graph, f.gold_events, h);
  std::vector<LocatedSpan> pred;
  for (const Document* d : f.train) {
    const auto spans = predict_args(model, *d, *d->event_type, f.syn.graph);
    const auto loc = located(d->doc_id, spans);
    pred.insert(pred.end(), loc.begin(), loc.end());
  }
  const auto report = span_prf(gold_spans(f.train), pred, MatchMode::ExactSpan);
  const std::array<ArgumentType, 2> causal = {ArgumentType::Reason, ArgumentType::AfterEffect};
  EXPECT_GT(pooled_f1(report, causal), 0.95);
}

TEST(Training, MissingEventLabelIsAnError) {
  const auto f = small_synthetic();
  EventLabels partial = f.gold_events;
  partial.erase(f.train.front()->doc_id);
  EXPECT_THROW(train_tagger(f.train, f.syn.graph, partial, {}), DataError);
}

TEST(Prediction, RecoversReasonSpan) {
  const auto g = flood_graph();
  std::vector<Document> docs;
  const std::vector<std::string> places = {"Dhaka", "Pune", "Lagos", "Quito", "Hanoi", "Cusco"};
  for (std::size_t i = 0; i < places.size(); ++i) {
    Document d = flood_doc();
    d.doc_id = "f" + std::to_string(i);
    d.sentences[1].tokens[6] = places[i];
    docs.push_back(d);
  }
  std::vector<const Document*> ptrs;
  EventLabels events;
  for (const auto& d : docs) {
    ptrs.push_back(&d);
    events[d.doc_id] = "Flood";
  }
  const auto model = train_tagger(ptrs, g, events, {});
  Document probe = flood_doc();
  probe.sentences[1].tokens[6] = "Accra";
  const auto spans = predict_args(model, probe, "Flood", g);
  EXPECT_NE(std::find(spans.begin(), spans.end(), PredictedSpan{1, {ArgumentType::Reason, 0, 2}}), spans.end());
}

TEST(Serialization, RoundTrip) {
  const auto f = small_synthetic();
  TaggerHyper h;
  h.epochs = 2;
  h.variant = TaggerVariant::EventAugmentation;
  const auto model = train_tagger(f.train, f.syn.graph, f.gold_events, h);
  const auto text = serialize_tagger(model);
  const auto back = parse_tagger(text);
  EXPECT_EQ(back, model);
  EXPECT_EQ(serialize_tagger(back), text);
}

TEST(Budget, ChunksAtSentenceBoundaries) {
  Document d;
  d.doc_id = "long";
  for (int i = 0; i < 6; ++i) d.sentences.push_back(sentence("one two three four five"));
  TaggerHyper h;
  h.token_budget = 20;
  const std::size_t m = 3;
  const auto parts = budgeted_instances(d, h, m);
  ASSERT_GT(parts.size(), 1u);
  std::vector<std::size_t> covered;
  for (const auto& p : parts) {
    EXPECT_LE(p.tokens.size() + 2 * m + 2, h.token_budget);
    covered.insert(covered.end(), p.sentences.begin(), p.sentences.end());
  }
  EXPECT_EQ(covered, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5}));
}
