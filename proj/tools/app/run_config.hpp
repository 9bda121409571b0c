#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathtext/classifiers.hpp"
#include "pathtext/corpus.hpp"
#include "pathtext/keywords.hpp"
#include "pathtext/lda.hpp"
#include "pathtext/preprocess.hpp"

namespace pathtext::app {

struct KeywordConfig {
  std::size_t top_n = kDefaultTopKeywords;
  std::size_t topics = 3;
  /// 0 selects 50 / topics.
  double alpha = 0.0;
  double beta = 0.01;
  std::size_t iterations = 1000;
  /// Gibbs sweeps when inferring topics for a report outside the LDA corpus.
  std::size_t infer_iterations = 200;
};

/// Everything a pipeline run needs. Every stochastic stage draws its seed from
/// `seed` through derive_seed with a stage name.
struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path out_dir = "pathtext-out";
  std::uint64_t seed = 0;

  double train_fraction = 0.70;
  bool stratified = false;

  std::optional<std::filesystem::path> stopwords_file;
  std::size_t bigram_min_count = 5;
  double bigram_min_score = 3.0;
  double low_df_threshold = 0.02;
  double high_df_threshold = 0.90;
  LowDfRule low_df_rule = LowDfRule::Every;

  std::vector<ClassifierSpec> classifiers = default_classifiers();
  bool macro_present_only = false;

  KeywordConfig keywords;

  /// One spec per kind with the default hyperparameters.
  static std::vector<ClassifierSpec> default_classifiers();

  /// Parses a JSON config. Relative paths resolve against `base_dir`.
  /// Unknown keys are rejected. Throws ValidationError.
  static RunConfig from_json(std::string_view text, const std::filesystem::path& base_dir);
  static RunConfig load(const std::filesystem::path& path);

  /// Throws ValidationError for out-of-range values or a missing manifest.
  void validate() const;

  SplitConfig split_config() const;
  PreprocessConfig preprocess_config() const;
  /// Spec with its stage seed filled in.
  ClassifierSpec seeded(const ClassifierSpec& spec) const;
  LdaConfig lda_config() const;

  /// Canonical JSON of the settings each stage depends on. Combined with
  /// input-file hashes to form cache keys.
  std::string preprocess_settings() const;
  std::string train_eval_settings() const;
  std::string keywords_settings() const;
};

}  // namespace pathtext::app
