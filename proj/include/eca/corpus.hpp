#pragma once

// Corpus data model, JSONL I/O, BIO label codec and context-scope instances.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace eca {

enum class ArgumentType : std::uint8_t { Time, Place, Casualties, AfterEffect, Reason, Participant };

inline constexpr std::array<ArgumentType, 6> kArgumentTypes = {
    ArgumentType::Time,        ArgumentType::Place,  ArgumentType::Casualties,
    ArgumentType::AfterEffect, ArgumentType::Reason, ArgumentType::Participant};

std::string_view to_string(ArgumentType type);
/// Throws DataError on an unknown name.
ArgumentType parse_argument_type(std::string_view name);

/// Typed token range [start, end) local to one sentence.
struct ArgumentSpan {
  ArgumentType type = ArgumentType::Time;
  std::size_t start = 0;
  std::size_t end = 0;

  auto operator<=>(const ArgumentSpan&) const = default;
};

struct Trigger {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string event_type;

  bool operator==(const Trigger&) const = default;
};

struct Sentence {
  std::vector<std::string> tokens;
  std::vector<ArgumentSpan> spans;
  std::vector<Trigger> triggers;

  bool operator==(const Sentence&) const = default;
};

enum class Split : std::uint8_t { Train, Valid, Test };

std::string_view to_string(Split split);
Split parse_split(std::string_view name);

struct Document {
  std::string doc_id;
  std::string language = "en";
  std::optional<std::string> event_type;
  Split split = Split::Train;
  std::vector<Sentence> sentences;

  bool operator==(const Document&) const = default;
};

/// Documents in file order. Each document carries its split, so the split
/// partition is disjoint and exhaustive by construction.
struct Corpus {
  std::vector<Document> documents;

  std::vector<const Document*> in_split(Split split) const;
  const Document* find(std::string_view doc_id) const;
};

/// Throws DataError naming the document and the violated rule.
void validate(const Document& doc);

Document document_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Document& doc);

/// Loads a JSONL corpus. Parse errors carry the 1-based line number;
/// invariant violations carry the doc_id.
Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::string_view text);
std::string dump_corpus(const Corpus& corpus);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// BIO labels.
//
// Content labels are indexed O=0, then B-k / I-k interleaved in
// kArgumentTypes order (B-Time=1, I-Time=2, B-Place=3, ...). Ignore marks
// augmentation positions and sits outside the content range.

class Label {
 public:
  static constexpr std::size_t kNumContent = 13;

  constexpr Label() = default;
  static constexpr Label outside() { return Label(0); }
  static constexpr Label ignore() { return Label(kNumContent); }
  static Label begin(ArgumentType t) { return Label(static_cast<std::uint8_t>(1 + 2 * static_cast<int>(t))); }
  static Label inside(ArgumentType t) { return Label(static_cast<std::uint8_t>(2 + 2 * static_cast<int>(t))); }
  static Label from_index(std::size_t i);
  static Label parse(std::string_view name);

  std::size_t index() const { return id_; }
  bool is_outside() const { return id_ == 0; }
  bool is_ignore() const { return id_ == kNumContent; }
  bool is_begin() const { return id_ > 0 && id_ < kNumContent && id_ % 2 == 1; }
  bool is_inside() const { return id_ > 0 && id_ < kNumContent && id_ % 2 == 0; }
  /// Only valid for begin/inside labels.
  ArgumentType type() const { return static_cast<ArgumentType>((id_ - 1) / 2); }
  std::string name() const;

  auto operator<=>(const Label&) const = default;

 private:
  constexpr explicit Label(std::uint8_t id) : id_(id) {}
  std::uint8_t id_ = 0;
};

using LabelSeq = std::vector<Label>;

/// Throws DataError on overlapping or out-of-range spans.
LabelSeq encode_bio(const Sentence& sentence);

/// Lenient decode: a dangling I-k opens a new span as if it were B-k, and
/// Ignore positions close any open span without being covered.
std::vector<ArgumentSpan> decode_bio(std::span<const Label> labels);

/// Explicit event_type, else the event of the earliest trigger by
/// (sentence, start), else nullopt.
std::optional<std::string> derive_doc_event_label(const Document& doc);

// ---------------------------------------------------------------------------
// Context instances.

enum class Scope : std::uint8_t { Sentence, Paragraph, Document };

std::string_view to_string(Scope scope);
/// Throws ConfigError on an unknown name.
Scope parse_scope(std::string_view name);

inline constexpr std::string_view kSentenceBoundary = "<sb>";

struct TokenRef {
  std::size_t sentence = 0;
  std::size_t token = 0;

  auto operator<=>(const TokenRef&) const = default;
};

/// A token sequence built from consecutive sentences of one document, with
/// `<sb>` between sentences. back_map[i] is empty exactly at `<sb>`.
struct ContextInstance {
  std::vector<std::string> tokens;
  std::vector<std::optional<TokenRef>> back_map;
  std::vector<std::size_t> sentences;  // document sentence indices, in order
};

std::vector<ContextInstance> make_context_instances(const Document& doc, Scope scope,
                                                    std::size_t paragraph_len = 4);

/// Builds one instance from an explicit run of sentence indices.
ContextInstance make_instance(const Document& doc, std::span<const std::size_t> sentences);

/// Gold labels for an instance; `<sb>` positions are O.
LabelSeq instance_labels(const Document& doc, const ContextInstance& instance);

}  // namespace eca
