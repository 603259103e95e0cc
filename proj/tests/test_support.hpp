#pragma once

#include <filesystem>
#include <string>

#include "eca/corpus.hpp"
#include "eca/util.hpp"

namespace testing_support {

inline std::filesystem::path data_dir() { return ECA_DATA_DIR; }

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("eca-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline eca::Sentence sentence(const std::string& text, std::vector<eca::ArgumentSpan> spans = {}) {
  eca::Sentence s;
  s.tokens = eca::split_whitespace(text);
  s.spans = std::move(spans);
  return s;
}

}  // namespace testing_support
