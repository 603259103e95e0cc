#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eca {

// ---------------------------------------------------------------------------
// Text helpers. Case folding is ASCII-only; scripts without case pass through.

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);

/// Whitespace split that also detaches leading/trailing ASCII punctuation
/// into separate tokens ("rain," -> "rain" ","). Used for rendered templates.
std::vector<std::string> simple_tokenize(std::string_view s);

std::string join(std::span<const std::string> parts, std::string_view sep);
/// Lines without their terminators; a trailing newline adds no empty line.
std::vector<std::string> split_lines(std::string_view s);

/// Decodes UTF-8 into code points. Invalid bytes decode as U+FFFD.
std::u32string utf8_decode(std::string_view s);
std::string utf8_encode(std::u32string_view s);

bool is_word_codepoint(char32_t c);
bool is_upper_codepoint(char32_t c);

// ---------------------------------------------------------------------------
// Files and hashing.

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames, so readers never see a
/// half-written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);
/// Hash over every regular file below `dir` (relative path + contents), in
/// sorted path order. Missing directory hashes as empty.
std::string sha256_tree(const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Seeded randomness. mt19937_64 has a standard-mandated output sequence; the
// bounded draws below avoid the implementation-defined std distributions so
// that results are identical across standard libraries.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, n). n must be > 0.
  std::size_t index(std::size_t n);
  /// Uniform real in [0, 1).
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[index(v.size())];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace eca
