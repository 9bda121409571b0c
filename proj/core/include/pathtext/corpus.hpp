#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pathtext {

/// One pathology report: its text plus primary-diagnosis label and site.
struct Report {
  std::string id;
  std::string text;
  std::string diagnosis;
  std::string site;

  friend bool operator==(const Report&, const Report&) = default;
};

/// An ordered collection of reports and the sorted set of their diagnoses.
class Corpus {
 public:
  Corpus() = default;

  /// Validates ids (non-empty, unique), text and diagnosis (non-empty) and
  /// derives the label set. Throws ValidationError.
  explicit Corpus(std::vector<Report> reports);

  const std::vector<Report>& reports() const { return reports_; }
  const std::vector<std::string>& label_set() const { return label_set_; }
  std::size_t size() const { return reports_.size(); }
  bool empty() const { return reports_.empty(); }
  const Report& operator[](std::size_t i) const { return reports_[i]; }

  /// Index of the report with `id`, or size() when absent.
  std::size_t find(const std::string& id) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::vector<Report> reports_;
  std::vector<std::string> label_set_;
};

struct SplitConfig {
  double train_fraction = 0.70;
  std::uint64_t seed = 0;
  bool stratified = false;

  /// Throws ValidationError unless 0 < train_fraction < 1.
  void validate() const;
};

struct TrainTestSplit {
  Corpus train;
  Corpus test;
  /// Non-fatal notes, e.g. labels that ended up on one side only.
  std::vector<std::string> warnings;
};

enum class DistributionKey { Diagnosis, Site };

/// Reads a CSV manifest with header `id,path,diagnosis,site`. Paths are
/// resolved against the manifest's directory; each payload must be UTF-8.
///
/// Throws IngestionError for unreadable files or malformed rows and
/// ValidationError for duplicate ids or empty report text.
Corpus load_corpus(const std::filesystem::path& manifest_path);

/// Counts reports per diagnosis or per site.
std::map<std::string, std::size_t> class_distribution(const Corpus& corpus, DistributionKey key);

/// Seeded train/test split. |train| = floor(n * train_fraction) exactly.
/// Both halves keep the corpus's relative report order.
///
/// Under stratification each label contributes floor(n_l * fraction) reports
/// to train, remainders are distributed by largest fractional part, and
/// single-report labels always go to train.
TrainTestSplit split_train_test(const Corpus& corpus, const SplitConfig& cfg);

}  // namespace pathtext
