#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "run_config.hpp"

namespace pathtext::app {

/// Stage directories under RunConfig::out_dir.
std::filesystem::path preprocess_dir(const RunConfig& cfg);
std::filesystem::path train_eval_dir(const RunConfig& cfg);
std::filesystem::path keywords_dir(const RunConfig& cfg);

/// Percent-encodes every byte outside [A-Za-z0-9._-] so report ids are safe
/// file names. A leading '.' is encoded too.
std::string safe_file_id(std::string_view id);

struct StageOutcome {
  bool cached = false;
  std::filesystem::path dir;
};

/// Splits, tokenizes, and filters the corpus. Writes split.csv, one token
/// file per report, bigrams.tsv, vocabulary.txt, and filter statistics.
StageOutcome cmd_preprocess(const RunConfig& cfg, std::ostream& log);

struct ClassifierResult {
  std::string classifier;
  bool ok = false;
  std::string error;
  double train_micro_f = 0.0;
  double test_micro_f = 0.0;
  double train_macro_f = 0.0;
  double test_macro_f = 0.0;
  std::vector<std::string> warnings;
};

struct TrainEvalOutcome {
  bool cached = false;
  std::filesystem::path dir;
  std::vector<ClassifierResult> results;
};

/// Fits TF-IDF on the training side, then trains and evaluates each configured
/// classifier. A failing classifier is recorded and the others still run.
TrainEvalOutcome cmd_train_eval(const RunConfig& cfg, std::ostream& log);

/// Aligned table with one row per classifier.
std::string format_results_table(const std::vector<ClassifierResult>& results);
std::string results_json(const std::vector<ClassifierResult>& results);

struct KeywordsOutcome {
  std::string report_id;
  std::filesystem::path html;
  std::filesystem::path json;
};

/// Renders the top keywords of one report. `report_id` may be "random", which
/// picks a report with the configured seed. Throws ValidationError listing
/// the available ids when the id is unknown.
KeywordsOutcome cmd_keywords(const RunConfig& cfg, const std::string& report_id,
                             std::ostream& log);

struct RunAllOutcome {
  TrainEvalOutcome train_eval;
  KeywordsOutcome keywords;
};

RunAllOutcome cmd_run_all(const RunConfig& cfg, const std::string& report_id, std::ostream& log);

}  // namespace pathtext::app
