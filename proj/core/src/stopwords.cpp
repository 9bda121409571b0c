#include "pathtext/error.hpp"
#include "pathtext/preprocess.hpp"
#include "pathtext/text_io.hpp"

namespace pathtext {

namespace detail {
extern const std::string_view kBundledStopwords;
}  // namespace detail

namespace {

std::unordered_set<std::string> parse_stopwords(std::string_view text) {
  std::unordered_set<std::string> words;
  for (std::string& line : split_lines(text)) {
    auto parts = split_whitespace(line);
    if (parts.empty() || parts.front().starts_with('#')) continue;
    words.insert(std::move(parts.front()));
  }
  return words;
}

}  // namespace

const std::unordered_set<std::string>& default_stopwords() {
  static const std::unordered_set<std::string> words = parse_stopwords(detail::kBundledStopwords);
  return words;
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
  auto words = parse_stopwords(read_text_file(path));
  if (words.empty()) throw ValidationError("stopword file is empty: " + path.string());
  return words;
}

PreprocessConfig PreprocessConfig::with_default_stopwords() {
  PreprocessConfig cfg;
  cfg.stopwords = default_stopwords();
  return cfg;
}

}  // namespace pathtext
