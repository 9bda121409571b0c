#include "pathtext/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "pathtext/csv.hpp"
#include "pathtext/error.hpp"
#include "pathtext/random.hpp"
#include "pathtext/text_io.hpp"

namespace pathtext {

Corpus::Corpus(std::vector<Report> reports) : reports_(std::move(reports)) {
  std::unordered_set<std::string> seen;
  std::set<std::string> labels;
  for (const Report& r : reports_) {
    if (r.id.empty()) throw ValidationError("report with empty id");
    if (!seen.insert(r.id).second) throw ValidationError("duplicate report id: " + r.id);
    if (r.text.empty()) throw ValidationError("report has empty text: " + r.id);
    if (r.diagnosis.empty()) throw ValidationError("report has empty diagnosis: " + r.id);
    labels.insert(r.diagnosis);
  }
  label_set_.assign(labels.begin(), labels.end());
}

std::size_t Corpus::find(const std::string& id) const {
  for (std::size_t i = 0; i < reports_.size(); ++i) {
    if (reports_[i].id == id) return i;
  }
  return reports_.size();
}

void SplitConfig::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("train_fraction must lie strictly between 0 and 1");
  }
}

Corpus load_corpus(const std::filesystem::path& manifest_path) {
  const std::string text = read_text_file(manifest_path);
  std::vector<CsvRecord> rows;
  try {
    rows = parse_csv(text);
  } catch (const FormatError& e) {
    throw IngestionError(manifest_path.string() + ": " + e.what());
  }
  if (rows.empty()) throw IngestionError(manifest_path.string() + ": manifest is empty");

  const std::vector<std::string> expected = {"id", "path", "diagnosis", "site"};
  if (rows.front().fields != expected) {
    throw IngestionError(manifest_path.string() + ": header must be 'id,path,diagnosis,site'");
  }

  const std::filesystem::path base = manifest_path.parent_path();
  std::vector<Report> reports;
  reports.reserve(rows.size() - 1);
  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const CsvRecord& row = rows[i];
    const std::string where = manifest_path.string() + ":" + std::to_string(row.line);
    if (row.fields.size() != 4) {
      throw IngestionError(where + ": expected 4 fields, found " +
                           std::to_string(row.fields.size()));
    }
    Report r{row.fields[0], {}, row.fields[2], row.fields[3]};
    if (r.id.empty()) throw ValidationError(where + ": empty id");
    if (!seen.insert(r.id).second) throw ValidationError(where + ": duplicate report id: " + r.id);
    std::filesystem::path payload = row.fields[1];
    if (payload.is_relative()) payload = base / payload;
    r.text = read_text_file(payload);
    if (r.text.empty()) throw ValidationError(where + ": empty text file for report " + r.id);
    if (r.diagnosis.empty()) throw ValidationError(where + ": empty diagnosis for report " + r.id);
    reports.push_back(std::move(r));
  }
  return Corpus(std::move(reports));
}

std::map<std::string, std::size_t> class_distribution(const Corpus& corpus, DistributionKey key) {
  std::map<std::string, std::size_t> counts;
  for (const Report& r : corpus.reports()) {
    ++counts[key == DistributionKey::Diagnosis ? r.diagnosis : r.site];
  }
  return counts;
}

namespace {

std::vector<std::size_t> stratified_train_indices(const Corpus& corpus, double fraction,
                                                  std::size_t target, Rng& rng,
                                                  std::vector<std::string>& warnings) {
  const auto& labels = corpus.label_set();
  std::vector<std::vector<std::size_t>> members(labels.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto it = std::lower_bound(labels.begin(), labels.end(), corpus[i].diagnosis);
    members[static_cast<std::size_t>(it - labels.begin())].push_back(i);
  }

  std::vector<std::size_t> quota(labels.size());
  std::vector<double> remainder(labels.size());
  std::size_t total = 0;
  for (std::size_t l = 0; l < labels.size(); ++l) {
    double exact = static_cast<double>(members[l].size()) * fraction;
    quota[l] = static_cast<std::size_t>(std::floor(exact));
    remainder[l] = exact - static_cast<double>(quota[l]);
    if (members[l].size() == 1) quota[l] = 1;
    total += quota[l];
  }

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  if (total < target) {
    // Largest remainder first; label order breaks ties.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    while (total < target) {
      bool progressed = false;
      for (std::size_t l : order) {
        if (total == target) break;
        if (quota[l] < members[l].size()) {
          ++quota[l];
          ++total;
          progressed = true;
        }
      }
      if (!progressed) break;
    }
  } else if (total > target) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] < remainder[b]; });
    // Keep one training report per label while possible, then give up
    // non-singleton labels, then singletons: the size law always holds.
    for (int floor_pass = 0; floor_pass < 3 && total > target; ++floor_pass) {
      while (total > target) {
        bool progressed = false;
        for (std::size_t l : order) {
          if (total == target) break;
          const std::size_t keep =
              floor_pass == 0 ? 1 : (floor_pass == 1 && members[l].size() == 1 ? 1 : 0);
          if (quota[l] > keep) {
            --quota[l];
            --total;
            progressed = true;
          }
        }
        if (!progressed) break;
      }
    }
  }

  std::vector<std::size_t> train;
  for (std::size_t l = 0; l < labels.size(); ++l) {
    std::vector<std::size_t>& m = members[l];
    rng.shuffle(std::span<std::size_t>(m));
    train.insert(train.end(), m.begin(), m.begin() + static_cast<std::ptrdiff_t>(quota[l]));
    if (quota[l] == m.size()) {
      warnings.push_back("label '" + labels[l] + "' has no test reports (" +
                         std::to_string(m.size()) + " total)");
    } else if (quota[l] == 0) {
      warnings.push_back("label '" + labels[l] + "' has no training reports");
    }
  }
  return train;
}

}  // namespace

TrainTestSplit split_train_test(const Corpus& corpus, const SplitConfig& cfg) {
  cfg.validate();
  const std::size_t n = corpus.size();
  if (n < 2) throw ValidationError("split_train_test needs at least 2 reports");

  // floor(n * fraction) computed so that e.g. 1949 * 0.7 = 1364.3 is not
  // perturbed by binary rounding of the fraction.
  const double product = static_cast<double>(n) * cfg.train_fraction;
  std::size_t target = static_cast<std::size_t>(std::floor(product + 1e-9));

  Rng rng(cfg.seed);
  TrainTestSplit result;
  std::vector<std::size_t> train_idx;
  if (cfg.stratified) {
    train_idx = stratified_train_indices(corpus, cfg.train_fraction, target, rng, result.warnings);
  } else {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<std::size_t>(order));
    train_idx.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(target));
  }

  std::vector<bool> in_train(n, false);
  for (std::size_t i : train_idx) in_train[i] = true;
  std::vector<Report> train, test;
  for (std::size_t i = 0; i < n; ++i) {
    (in_train[i] ? train : test).push_back(corpus[i]);
  }
  result.train = Corpus(std::move(train));
  result.test = Corpus(std::move(test));
  return result;
}

}  // namespace pathtext
