#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace pathtext {

class Corpus;

using Tokens = std::vector<std::string>;

/// A report reduced to its filtered token sequence, label carried through.
struct TokenizedReport {
  std::string id;
  Tokens tokens;
  std::string diagnosis;

  friend bool operator==(const TokenizedReport&, const TokenizedReport&) = default;
};

/// How the low document-frequency threshold is applied across categories.
enum class LowDfRule {
  /// Remove a word only if it is rare in every category.
  Every,
  /// Remove a word if it is rare in at least one category.
  Any,
};

struct PreprocessConfig {
  std::unordered_set<std::string> stopwords;
  std::size_t bigram_min_count = 5;
  double bigram_min_score = 3.0;  // PMI, nats
  double low_df_threshold = 0.02;
  double high_df_threshold = 0.90;
  LowDfRule low_df_rule = LowDfRule::Every;

  /// Config using the bundled English stopword list.
  static PreprocessConfig with_default_stopwords();

  /// Throws ValidationError on out-of-range thresholds.
  void validate() const;
};

/// The bundled English stopword list.
const std::unordered_set<std::string>& default_stopwords();

/// One word per line; blank lines and lines starting with '#' are ignored.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

struct BigramStats {
  std::size_t count = 0;
  double score = 0.0;

  friend bool operator==(const BigramStats&, const BigramStats&) = default;
};

/// Collocations accepted for joining, keyed by (first, second).
class BigramTable {
 public:
  using Key = std::pair<std::string, std::string>;

  void insert(std::string first, std::string second, BigramStats stats);
  bool contains(std::string_view first, std::string_view second) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<Key, BigramStats, std::less<>>& entries() const { return entries_; }

  /// Tab-separated `first second count score` lines, sorted by pair.
  std::string serialize() const;
  static BigramTable deserialize(std::string_view text);

  friend bool operator==(const BigramTable&, const BigramTable&) = default;

 private:
  std::map<Key, BigramStats, std::less<>> entries_;
};

/// Lowercases ASCII letters and splits on every non-alphanumeric byte.
Tokens normalize_and_tokenize(std::string_view text);

/// Drops tokens in cfg.stopwords; order of survivors is preserved.
Tokens remove_stopwords(const Tokens& tokens, const PreprocessConfig& cfg);

/// Finds adjacent pairs with corpus count >= bigram_min_count and
/// PMI = ln(c(a,b) * U^2 / (P * c(a) * c(b))) >= bigram_min_score, where U is
/// the total unigram count and P the total number of adjacent pairs.
BigramTable detect_bigrams(const std::vector<Tokens>& docs, const PreprocessConfig& cfg);

/// Greedy left-to-right joining: a matched pair becomes "first-second" and
/// both tokens are consumed.
Tokens join_bigrams(const Tokens& tokens, const BigramTable& table);

struct FrequencyFilterStats {
  std::size_t vocabulary_before = 0;
  std::size_t kept = 0;
  /// Words failing the per-category low-frequency rule.
  std::size_t removed_low_df = 0;
  /// Words exceeding the overall high-frequency threshold.
  std::size_t removed_high_df = 0;
  /// Words failing both rules (counted in both fields above).
  std::size_t removed_both = 0;
};

struct FrequencyFilterResult {
  std::set<std::string> kept_vocabulary;
  std::vector<TokenizedReport> docs;
  FrequencyFilterStats stats;
  std::vector<std::string> warnings;
};

/// Document-frequency filter. A word is removed when its per-category
/// document frequency is below low_df_threshold (in every category, or in any
/// category, per low_df_rule), or when its overall document frequency exceeds
/// high_df_threshold. Documents emptied by filtering are kept with a warning.
FrequencyFilterResult frequency_filter(const std::vector<TokenizedReport>& docs,
                                       const PreprocessConfig& cfg);

/// Keeps only tokens present in `vocabulary`.
Tokens restrict_to_vocabulary(const Tokens& tokens, const std::set<std::string>& vocabulary);

/// normalize -> stopwords -> bigram join, for a single text.
Tokens tokenize_report(std::string_view text, const PreprocessConfig& cfg, const BigramTable& table);

/// Statistics learned on a training corpus and applied to any report.
struct PreprocessModel {
  BigramTable bigrams;
  std::set<std::string> kept_vocabulary;
  FrequencyFilterStats stats;
  std::vector<std::string> warnings;
};

/// Learns bigrams and the kept vocabulary from `train`, returning the
/// filtered training documents in corpus order.
std::pair<PreprocessModel, std::vector<TokenizedReport>> fit_preprocess(
    const Corpus& train, const PreprocessConfig& cfg);

/// Applies a fitted preprocessing model to any corpus.
std::vector<TokenizedReport> apply_preprocess(const Corpus& corpus, const PreprocessConfig& cfg,
                                              const PreprocessModel& model);

}  // namespace pathtext
