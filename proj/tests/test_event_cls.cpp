#include <gtest/gtest.h>

#include "eca/error.hpp"
#include "eca/eval.hpp"
#include "eca/event_cls.hpp"
#include "eca/synthetic.hpp"
#include "test_support.hpp"

using namespace eca;
using testing_support::sentence;

namespace {

Document doc(const std::string& id, const std::vector<std::string>& sentences, std::optional<std::string> event) {
  Document d;
  d.doc_id = id;
  d.language = "en";
  d.event_type = std::move(event);
  for (const auto& s : sentences) d.sentences.push_back(sentence(s));
  return d;
}

// Disjoint vocabularies per class.
std::vector<Document> separable() {
  std::vector<Document> out;
  const std::vector<std::pair<std::string, std::vector<std::string>>> vocab = {
      {"Flood", {"river", "water", "rain", "banks"}},
      {"Fire", {"flames", "smoke", "blaze", "burning"}},
      {"Earthquake", {"tremor", "quake", "magnitude", "shaking"}}};
  int n = 0;
  for (const auto& [label, words] : vocab) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      for (std::size_t j = 0; j < words.size(); ++j) {
        if (i == j) continue;
        out.push_back(doc("d" + std::to_string(n++), {words[i] + " " + words[j], words[j]}, label));
      }
    }
  }
  return out;
}

std::vector<const Document*> ptrs(const std::vector<Document>& v) {
  std::vector<const Document*> out;
  for (const auto& d : v) out.push_back(&d);
  return out;
}

}  // namespace

TEST(Title, OneSentenceDoc) {
  EXPECT_EQ(title_of(doc("a", {"floods hit town"}, {})), (std::vector<std::string>{"floods", "hit", "town"}));
}

TEST(Title, FirstTwoSentencesOnly) {
  const auto t = title_of(doc("a", {"a b", "c", "d", "e", "f"}, {}));
  EXPECT_EQ(t, (std::vector<std::string>{"a", "b", std::string(kSentenceBoundary), "c"}));
}

TEST(Title, LateCueIsAbsent) {
  const auto t = title_of(doc("a", {"officials said", "more later", "nothing here", "a flood hit"}, {}));
  EXPECT_EQ(std::find(t.begin(), t.end(), "flood"), t.end());
}

TEST(Classifier, SeparableCorpusIsLearnedPerfectly) {
  const auto docs = separable();
  const auto model = train_event_classifier(ptrs(docs), {10, 3});
  EXPECT_EQ(model.labels, (std::vector<std::string>{"Earthquake", "Fire", "Flood"}));
  for (const auto& d : docs) EXPECT_EQ(predict_event(model, d).event_type, *d.event_type);
}

TEST(Classifier, DeterministicAndOrderIndependent) {
  auto docs = separable();
  const auto a = train_event_classifier(ptrs(docs), {10, 3});
  std::reverse(docs.begin(), docs.end());
  const auto b = train_event_classifier(ptrs(docs), {10, 3});
  EXPECT_EQ(a, b);
  EXPECT_EQ(serialize_classifier(a), serialize_classifier(b));
}

TEST(Classifier, OovTitlePicksFirstLabelWithZeroScore) {
  const auto model = train_event_classifier(ptrs(separable()), {10, 3});
  const auto p = predict_event(model, doc("x", {"zzz qqq"}, {}));
  EXPECT_EQ(p.event_type, "Earthquake");
  EXPECT_EQ(p.score, 0.0);
}

TEST(Classifier, MissingLabelsAreListed) {
  auto docs = separable();
  docs.push_back(doc("unlabelled-1", {"river"}, std::nullopt));
  try {
    train_event_classifier(ptrs(docs), {});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("unlabelled-1"), std::string::npos);
  }
}

TEST(Classifier, ArgmaxInvariantUnderPositiveRescaling) {
  const auto syn = generate_synthetic_corpus(4, {4, 20, 6, 0.5, 0.8, 0.2, 0.7});
  const auto model = train_event_classifier(syn.corpus.in_split(Split::Train), {5, 4});
  ClassifierModel scaled = model;
  for (auto& [f, w] : scaled.weights)
    for (auto& x : w) x *= 3.7;
  for (const auto& d : syn.corpus.documents) {
    EXPECT_EQ(predict_event(model, d).event_type, predict_event(scaled, d).event_type);
  }
}

TEST(Classifier, CorruptedTitleCanFlipPrediction) {
  const auto docs = separable();
  const auto model = train_event_classifier(ptrs(docs), {10, 3});
  // a Flood document whose title words were replaced by Fire vocabulary
  const auto p = predict_event(model, doc("c", {"flames smoke", "blaze"}, "Flood"));
  EXPECT_EQ(p.event_type, "Fire");
}

TEST(Classifier, SerializationRoundTrip) {
  const auto model = train_event_classifier(ptrs(separable()), {10, 3});
  EXPECT_EQ(parse_classifier(serialize_classifier(model)), model);
}

TEST(Classifier, MicroF1EqualsAccuracy) {
  const auto syn = generate_synthetic_corpus(8, {6, 20, 4, 0.6, 0.8, 0.2, 0.7});
  const auto model = train_event_classifier(syn.corpus.in_split(Split::Train), {3, 8});
  std::vector<std::string> gold, pred;
  std::size_t hits = 0;
  for (const Document* d : syn.corpus.in_split(Split::Test)) {
    gold.push_back(*d->event_type);
    pred.push_back(predict_event(model, *d).event_type);
    hits += gold.back() == pred.back();
  }
  EXPECT_DOUBLE_EQ(micro_f1(gold, pred), static_cast<double>(hits) / static_cast<double>(gold.size()));
}
