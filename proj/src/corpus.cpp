#include "eca/corpus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "eca/error.hpp"
#include "eca/util.hpp"

namespace eca {

namespace {

constexpr std::array<std::string_view, 6> kTypeNames = {"Time",        "Place",  "Casualties",
                                                        "AfterEffect", "Reason", "Participant"};
constexpr std::array<std::string_view, 6> kLanguages = {"en", "bn", "hi", "mr", "ta", "other"};

}  // namespace

std::string_view to_string(ArgumentType type) { return kTypeNames[static_cast<std::size_t>(type)]; }

ArgumentType parse_argument_type(std::string_view name) {
  for (std::size_t i = 0; i < kTypeNames.size(); ++i) {
    if (kTypeNames[i] == name) return static_cast<ArgumentType>(i);
  }
  throw DataError("unknown argument type '" + std::string(name) + "'");
}

std::string_view to_string(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Valid: return "valid";
    case Split::Test: return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::Train;
  if (name == "valid") return Split::Valid;
  if (name == "test") return Split::Test;
  throw DataError("unknown split '" + std::string(name) + "'");
}

std::vector<const Document*> Corpus::in_split(Split split) const {
  std::vector<const Document*> out;
  for (const auto& d : documents) {
    if (d.split == split) out.push_back(&d);
  }
  return out;
}

const Document* Corpus::find(std::string_view doc_id) const {
  for (const auto& d : documents) {
    if (d.doc_id == doc_id) return &d;
  }
  return nullptr;
}

void validate(const Document& doc) {
  auto fail = [&](const std::string& why) { throw DataError("document '" + doc.doc_id + "': " + why); };
  if (doc.doc_id.empty()) throw DataError("document with empty doc_id");
  if (std::find(kLanguages.begin(), kLanguages.end(), doc.language) == kLanguages.end()) {
    fail("unknown language '" + doc.language + "'");
  }
  if (doc.sentences.empty()) fail("no sentences");
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const auto& sent = doc.sentences[s];
    const std::string where = "sentence " + std::to_string(s) + ": ";
    if (sent.tokens.empty()) fail(where + "no tokens");
    auto spans = sent.spans;
    std::sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
    for (std::size_t i = 0; i < spans.size(); ++i) {
      const auto& sp = spans[i];
      if (sp.end <= sp.start) {
        fail(where + "span end " + std::to_string(sp.end) + " <= start " + std::to_string(sp.start));
      }
      if (sp.end > sent.tokens.size()) fail(where + "span end out of range");
      if (i > 0 && spans[i - 1].end > sp.start) fail(where + "overlapping spans");
    }
    for (const auto& t : sent.triggers) {
      if (t.end <= t.start || t.end > sent.tokens.size()) fail(where + "trigger out of range");
    }
  }
}

Document document_from_json(const nlohmann::json& j) {
  Document doc;
  doc.doc_id = j.at("doc_id").get<std::string>();
  doc.language = j.at("language").get<std::string>();
  if (auto it = j.find("event_type"); it != j.end() && !it->is_null()) doc.event_type = it->get<std::string>();
  doc.split = parse_split(j.at("split").get<std::string>());
  for (const auto& js : j.at("sentences")) {
    Sentence s;
    s.tokens = js.at("tokens").get<std::vector<std::string>>();
    if (auto it = js.find("spans"); it != js.end()) {
      for (const auto& sp : *it) {
        s.spans.push_back({parse_argument_type(sp.at("type").get<std::string>()), sp.at("start").get<std::size_t>(),
                           sp.at("end").get<std::size_t>()});
      }
    }
    if (auto it = js.find("triggers"); it != js.end()) {
      for (const auto& t : *it) {
        s.triggers.push_back(
            {t.at("start").get<std::size_t>(), t.at("end").get<std::size_t>(), t.at("event_type").get<std::string>()});
      }
    }
    doc.sentences.push_back(std::move(s));
  }
  return doc;
}

nlohmann::json to_json(const Document& doc) {
  nlohmann::json j;
  j["doc_id"] = doc.doc_id;
  j["language"] = doc.language;
  if (doc.event_type) j["event_type"] = *doc.event_type;
  j["split"] = std::string(to_string(doc.split));
  auto sentences = nlohmann::json::array();
  for (const auto& s : doc.sentences) {
    nlohmann::json js;
    js["tokens"] = s.tokens;
    auto spans = nlohmann::json::array();
    for (const auto& sp : s.spans) {
      spans.push_back({{"type", std::string(to_string(sp.type))}, {"start", sp.start}, {"end", sp.end}});
    }
    js["spans"] = std::move(spans);
    if (!s.triggers.empty()) {
      auto triggers = nlohmann::json::array();
      for (const auto& t : s.triggers) {
        triggers.push_back({{"start", t.start}, {"end", t.end}, {"event_type", t.event_type}});
      }
      js["triggers"] = std::move(triggers);
    }
    sentences.push_back(std::move(js));
  }
  j["sentences"] = std::move(sentences);
  return j;
}

Corpus parse_corpus(std::string_view text) {
  Corpus corpus;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    Document doc;
    try {
      doc = document_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      validate(doc);
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen.insert(doc.doc_id).second) {
      throw DataError("line " + std::to_string(line_no) + ": document '" + doc.doc_id + "': duplicate doc_id");
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) { return parse_corpus(read_file(path)); }

std::string dump_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& d : corpus.documents) {
    out += to_json(d).dump();
    out += '\n';
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  write_file_atomic(path, dump_corpus(corpus));
}

// ---------------------------------------------------------------------------

Label Label::from_index(std::size_t i) {
  if (i > kNumContent) throw DataError("label index out of range");
  return Label(static_cast<std::uint8_t>(i));
}

Label Label::parse(std::string_view name) {
  if (name == "O") return outside();
  if (name == "IGNORE") return ignore();
  if (name.size() > 2 && name[1] == '-') {
    ArgumentType t = parse_argument_type(name.substr(2));
    if (name[0] == 'B') return begin(t);
    if (name[0] == 'I') return inside(t);
  }
  throw DataError("unknown label '" + std::string(name) + "'");
}

std::string Label::name() const {
  if (is_outside()) return "O";
  if (is_ignore()) return "IGNORE";
  return std::string(is_begin() ? "B-" : "I-") + std::string(to_string(type()));
}

LabelSeq encode_bio(const Sentence& sentence) {
  LabelSeq labels(sentence.tokens.size(), Label::outside());
  for (const auto& sp : sentence.spans) {
    if (sp.end <= sp.start || sp.end > labels.size()) throw DataError("span out of range");
    for (std::size_t i = sp.start; i < sp.end; ++i) {
      if (!labels[i].is_outside()) throw DataError("overlapping spans at token " + std::to_string(i));
      labels[i] = i == sp.start ? Label::begin(sp.type) : Label::inside(sp.type);
    }
  }
  return labels;
}

std::vector<ArgumentSpan> decode_bio(std::span<const Label> labels) {
  std::vector<ArgumentSpan> spans;
  std::optional<ArgumentSpan> open;
  auto close = [&](std::size_t end) {
    if (open) {
      open->end = end;
      spans.push_back(*open);
      open.reset();
    }
  };
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Label l = labels[i];
    if (l.is_begin() || (l.is_inside() && !(open && open->type == l.type()))) {
      close(i);
      open = ArgumentSpan{l.type(), i, i};
    } else if (!l.is_inside()) {
      close(i);
    }
  }
  close(labels.size());
  return spans;
}

std::optional<std::string> derive_doc_event_label(const Document& doc) {
  if (doc.event_type) return doc.event_type;
  for (const auto& s : doc.sentences) {
    const Trigger* first = nullptr;
    for (const auto& t : s.triggers) {
      // ties on start fall back to the event name so the result does not
      // depend on trigger order within the record
      if (!first || t.start < first->start || (t.start == first->start && t.event_type < first->event_type)) {
        first = &t;
      }
    }
    if (first) return first->event_type;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Scope scope) {
  switch (scope) {
    case Scope::Sentence: return "sentence";
    case Scope::Paragraph: return "paragraph";
    case Scope::Document: return "document";
  }
  return "document";
}

Scope parse_scope(std::string_view name) {
  if (name == "sentence") return Scope::Sentence;
  if (name == "paragraph") return Scope::Paragraph;
  if (name == "document") return Scope::Document;
  throw ConfigError("unknown scope '" + std::string(name) + "' (expected sentence|paragraph|document)");
}

ContextInstance make_instance(const Document& doc, std::span<const std::size_t> sentences) {
  ContextInstance inst;
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    const std::size_t s = sentences[k];
    if (k > 0) {
      inst.tokens.emplace_back(kSentenceBoundary);
      inst.back_map.emplace_back(std::nullopt);
    }
    const auto& toks = doc.sentences.at(s).tokens;
    for (std::size_t t = 0; t < toks.size(); ++t) {
      inst.tokens.push_back(toks[t]);
      inst.back_map.emplace_back(TokenRef{s, t});
    }
    inst.sentences.push_back(s);
  }
  return inst;
}

std::vector<ContextInstance> make_context_instances(const Document& doc, Scope scope, std::size_t paragraph_len) {
  if (paragraph_len == 0) throw ConfigError("paragraph_len must be >= 1");
  const std::size_t n = doc.sentences.size();
  std::size_t block = scope == Scope::Sentence ? 1 : scope == Scope::Paragraph ? paragraph_len : std::max<std::size_t>(n, 1);
  std::vector<ContextInstance> out;
  for (std::size_t begin = 0; begin < n; begin += block) {
    std::vector<std::size_t> ids;
    for (std::size_t s = begin; s < std::min(n, begin + block); ++s) ids.push_back(s);
    out.push_back(make_instance(doc, ids));
  }
  return out;
}

LabelSeq instance_labels(const Document& doc, const ContextInstance& instance) {
  LabelSeq out;
  out.reserve(instance.tokens.size());
  std::size_t current = static_cast<std::size_t>(-1);
  LabelSeq sentence_labels;
  for (const auto& ref : instance.back_map) {
    if (!ref) {
      out.push_back(Label::outside());
      continue;
    }
    if (ref->sentence != current) {
      current = ref->sentence;
      sentence_labels = encode_bio(doc.sentences.at(current));
    }
    out.push_back(sentence_labels[ref->token]);
  }
  return out;
}

}  // namespace eca
