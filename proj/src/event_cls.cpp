#include "eca/event_cls.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "eca/error.hpp"
#include "eca/util.hpp"

namespace eca {

std::vector<std::string> title_of(const Document& doc) {
  if (doc.sentences.empty()) throw DataError("document '" + doc.doc_id + "' has no sentences");
  std::vector<std::string> out = doc.sentences[0].tokens;
  if (doc.sentences.size() > 1) {
    out.emplace_back(kSentenceBoundary);
    out.insert(out.end(), doc.sentences[1].tokens.begin(), doc.sentences[1].tokens.end());
  }
  return out;
}

std::vector<std::string> title_features(std::span<const std::string> title) {
  std::vector<std::string> out;
  out.reserve(title.size() * 2);
  for (std::size_t i = 0; i < title.size(); ++i) {
    const std::string w = to_lower(title[i]);
    out.push_back("u=" + w);
    if (i + 1 < title.size()) out.push_back("b=" + w + "|" + to_lower(title[i + 1]));
  }
  return out;
}

namespace {

struct Example {
  std::string doc_id;
  std::vector<std::string> features;
  std::size_t label = 0;
};

}  // namespace

ClassifierModel train_event_classifier(std::span<const Document* const> docs, const EventClassifierHyper& hyper) {
  std::vector<Example> examples;
  std::vector<std::string> missing;
  std::set<std::string> label_set;
  std::vector<std::string> gold;
  for (const Document* d : docs) {
    auto label = derive_doc_event_label(*d);
    if (!label) {
      missing.push_back(d->doc_id);
      continue;
    }
    label_set.insert(*label);
    examples.push_back({d->doc_id, title_features(title_of(*d)), 0});
    gold.push_back(*label);
  }
  if (!missing.empty()) throw DataError("documents without an event label: " + join(missing, ", "));
  if (examples.empty()) throw DataError("no training documents for the event classifier");

  ClassifierModel model;
  model.labels.assign(label_set.begin(), label_set.end());
  model.hyper = hyper;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    examples[i].label = static_cast<std::size_t>(
        std::lower_bound(model.labels.begin(), model.labels.end(), gold[i]) - model.labels.begin());
  }
  // input order must not matter: sort, then let the seed decide
  std::sort(examples.begin(), examples.end(), [](const Example& a, const Example& b) { return a.doc_id < b.doc_id; });

  const std::size_t n_labels = model.labels.size();
  std::unordered_map<std::string, std::vector<double>> w, u;  // weights and timestamped update sums
  double c = 1.0;
  Rng rng(hyper.seed);
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t idx : order) {
      const Example& ex = examples[idx];
      std::vector<double> scores(n_labels, 0.0);
      for (const auto& f : ex.features) {
        if (auto it = w.find(f); it != w.end()) {
          for (std::size_t l = 0; l < n_labels; ++l) scores[l] += it->second[l];
        }
      }
      std::size_t best = 0;
      for (std::size_t l = 1; l < n_labels; ++l) {
        if (scores[l] > scores[best]) best = l;
      }
      if (best != ex.label) {
        for (const auto& f : ex.features) {
          auto& wf = w.try_emplace(f, n_labels, 0.0).first->second;
          auto& uf = u.try_emplace(f, n_labels, 0.0).first->second;
          wf[ex.label] += 1.0;
          wf[best] -= 1.0;
          uf[ex.label] += c;
          uf[best] -= c;
        }
      }
      c += 1.0;
    }
  }
  for (auto& [f, wf] : w) {
    std::vector<double> avg(n_labels);
    bool nonzero = false;
    for (std::size_t l = 0; l < n_labels; ++l) {
      avg[l] = wf[l] - u[f][l] / c;
      nonzero = nonzero || avg[l] != 0.0;
    }
    if (nonzero) model.weights.emplace(f, std::move(avg));
  }
  return model;
}

EventPrediction predict_title(const ClassifierModel& model, std::span<const std::string> title) {
  const std::size_t n = model.labels.size();
  if (n == 0) throw DataError("event classifier has no labels");
  std::vector<double> scores(n, 0.0);
  for (const auto& f : title_features(title)) {
    if (auto it = model.weights.find(f); it != model.weights.end()) {
      for (std::size_t l = 0; l < n; ++l) scores[l] += it->second[l];
    }
  }
  std::size_t best = 0;
  for (std::size_t l = 1; l < n; ++l) {
    if (scores[l] > scores[best]) best = l;
  }
  double runner_up = 0.0;
  bool have_runner = false;
  for (std::size_t l = 0; l < n; ++l) {
    if (l == best) continue;
    if (!have_runner || scores[l] > runner_up) runner_up = scores[l];
    have_runner = true;
  }
  return {model.labels[best], have_runner ? scores[best] - runner_up : 0.0};
}

EventPrediction predict_event(const ClassifierModel& model, const Document& doc) {
  return predict_title(model, title_of(doc));
}

std::string serialize_classifier(const ClassifierModel& model) {
  nlohmann::json j;
  j["backend"] = "averaged_perceptron";
  j["labels"] = model.labels;
  j["epochs"] = model.hyper.epochs;
  j["seed"] = model.hyper.seed;
  nlohmann::json weights = nlohmann::json::object();
  // std::map key order keeps the output canonical
  std::map<std::string, const std::vector<double>*> sorted;
  for (const auto& [f, w] : model.weights) sorted.emplace(f, &w);
  for (const auto& [f, w] : sorted) {
    nlohmann::json sparse = nlohmann::json::object();
    for (std::size_t l = 0; l < w->size(); ++l) {
      if ((*w)[l] != 0.0) sparse[model.labels[l]] = (*w)[l];
    }
    weights[f] = std::move(sparse);
  }
  j["weights"] = std::move(weights);
  return j.dump() + "\n";
}

ClassifierModel parse_classifier(std::string_view text) {
  ClassifierModel model;
  try {
    const auto j = nlohmann::json::parse(text);
    model.labels = j.at("labels").get<std::vector<std::string>>();
    model.hyper.epochs = j.at("epochs").get<std::size_t>();
    model.hyper.seed = j.at("seed").get<std::uint64_t>();
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < model.labels.size(); ++i) index[model.labels[i]] = i;
    for (const auto& [f, sparse] : j.at("weights").items()) {
      std::vector<double> w(model.labels.size(), 0.0);
      for (const auto& [label, value] : sparse.items()) w.at(index.at(label)) = value.get<double>();
      model.weights.emplace(f, std::move(w));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("event model: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw DataError(std::string("event model: unknown label in weights"));
  }
  if (model.labels.empty()) throw DataError("event model: empty label set");
  return model;
}

}  // namespace eca
