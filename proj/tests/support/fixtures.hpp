#pragma once

// Shared fixtures and brute-force oracles for the unit and acceptance tests.
// The oracles deliberately avoid the library's code paths: dense arrays,
// nested loops, formulas written out literally.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pathtext/pathtext.hpp"
#include "pathtext/random.hpp"

namespace pathtext::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static std::uint64_t counter = 0;
    Rng rng(reinterpret_cast<std::uintptr_t>(this) ^ ++counter);
    path_ = std::filesystem::temp_directory_path() /
            ("pathtext-" + tag + "-" + std::to_string(rng.next() % 1000000007ULL));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& contents) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << contents;
}

struct ManifestRow {
  std::string id;
  std::string text;
  std::string diagnosis;
  std::string site;
};

/// Writes one text file per row plus manifest.csv; returns the manifest path.
inline std::filesystem::path write_corpus(const std::filesystem::path& dir,
                                          const std::vector<ManifestRow>& rows) {
  std::string manifest = "id,path,diagnosis,site\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string rel = "reports/r" + std::to_string(i) + ".txt";
    write_file(dir / rel, rows[i].text);
    manifest += csv_escape(rows[i].id) + "," + rel + "," + csv_escape(rows[i].diagnosis) + "," +
                csv_escape(rows[i].site) + "\n";
  }
  write_file(dir / "manifest.csv", manifest);
  return dir / "manifest.csv";
}

// ---------------------------------------------------------------- TF-IDF

/// Literal tf * ln(N / df) over dense arrays. Terms with zero weight are left
/// out so the result lines up with the sparse transform.
inline std::map<std::string, double> tfidf_oracle(const std::vector<Tokens>& train,
                                                  const Tokens& doc) {
  std::vector<std::string> vocab;
  for (const auto& d : train) {
    for (const auto& t : d) {
      if (std::find(vocab.begin(), vocab.end(), t) == vocab.end()) vocab.push_back(t);
    }
  }
  std::map<std::string, double> out;
  if (doc.empty()) return out;
  const double n_docs = static_cast<double>(train.size());
  for (const std::string& term : vocab) {
    double df = 0;
    for (const auto& d : train) {
      bool seen = false;
      for (const auto& t : d) seen = seen || t == term;
      if (seen) df += 1;
    }
    double count = 0;
    for (const auto& t : doc) count += t == term ? 1 : 0;
    const double w = (count / static_cast<double>(doc.size())) * std::log(n_docs / df);
    if (w != 0.0) out[term] = w;
  }
  return out;
}

/// Up to 20 documents of 1..10 tokens over a small alphabet so terms repeat.
inline std::vector<Tokens> random_micro_corpus(Rng& rng) {
  static const char* kWords[] = {"tumor", "cell", "node", "lung", "grade", "margin", "renal", "x"};
  const std::size_t n_docs = 1 + rng.uniform_index(20);
  std::vector<Tokens> docs(n_docs);
  for (auto& d : docs) {
    const std::size_t len = 1 + rng.uniform_index(10);
    for (std::size_t i = 0; i < len; ++i) d.push_back(kWords[rng.uniform_index(8)]);
  }
  return docs;
}

// --------------------------------------------------------------- metrics

struct MetricOracle {
  double micro_f = 0.0;
  double macro_f = 0.0;
  double accuracy = 0.0;
};

/// Per class, counts TP/FP/FN by scanning every instance, then evaluates
/// F = 2PR/(P+R) as the exact fraction 2TP/(2TP+FP+FN) with one rounding.
inline MetricOracle metric_oracle(const std::vector<std::size_t>& gold,
                                  const std::vector<std::size_t>& pred, std::size_t n_classes) {
  MetricOracle o;
  std::uint64_t sum_tp = 0, sum_fp = 0, sum_fn = 0, correct = 0;
  double f_sum = 0.0;
  for (std::size_t j = 0; j < n_classes; ++j) {
    std::uint64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (pred[i] == j && gold[i] == j) ++tp;
      if (pred[i] == j && gold[i] != j) ++fp;
      if (pred[i] != j && gold[i] == j) ++fn;
    }
    sum_tp += tp;
    sum_fp += fp;
    sum_fn += fn;
    const std::uint64_t den = 2 * tp + fp + fn;
    f_sum += den == 0 ? 0.0 : static_cast<double>(2 * tp) / static_cast<double>(den);
  }
  for (std::size_t i = 0; i < gold.size(); ++i) correct += gold[i] == pred[i] ? 1 : 0;
  const std::uint64_t den = 2 * sum_tp + sum_fp + sum_fn;
  o.micro_f = den == 0 ? 0.0 : static_cast<double>(2 * sum_tp) / static_cast<double>(den);
  o.macro_f = f_sum / static_cast<double>(n_classes);
  o.accuracy = static_cast<double>(correct) / static_cast<double>(gold.size());
  return o;
}

// ----------------------------------------------------- separable corpus

/// 4 classes with disjoint keyword vocabularies plus shared filler words.
inline std::vector<TokenizedReport> separable_reports(std::size_t n, std::uint64_t seed,
                                                      std::size_t n_classes = 4) {
  static const char* kFiller[] = {"specimen", "received", "tissue", "section", "stain",
                                  "gross",    "fixed",    "sample", "slide",   "noted"};
  Rng rng(seed);
  std::vector<TokenizedReport> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % n_classes;
    TokenizedReport r;
    r.id = "doc" + std::to_string(i);
    r.diagnosis = "class" + std::to_string(c);
    for (int k = 0; k < 8; ++k) {
      r.tokens.push_back("k" + std::to_string(c) + "w" + std::to_string(rng.uniform_index(10)));
    }
    for (int k = 0; k < 8; ++k) r.tokens.push_back(kFiller[rng.uniform_index(10)]);
    rng.shuffle(std::span<std::string>(r.tokens));
    out.push_back(std::move(r));
  }
  return out;
}

struct VectorizedData {
  TfidfModel tfidf;
  LabelEncoding encoding;
  std::vector<SparseVector> X_train, X_test;
  std::vector<std::size_t> y_train, y_test;
};

/// Seeded 70/30 split of `reports`, TF-IDF fitted on the training side.
inline VectorizedData vectorize_split(const std::vector<TokenizedReport>& reports,
                                      std::uint64_t seed) {
  std::vector<std::size_t> order(reports.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  const std::size_t n_train = reports.size() * 7 / 10;
  std::vector<Tokens> train_docs, test_docs;
  std::vector<std::string> labels;
  VectorizedData d;
  for (const auto& r : reports) labels.push_back(r.diagnosis);
  d.encoding = LabelEncoding(labels);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& r = reports[order[k]];
    if (k < n_train) {
      train_docs.push_back(r.tokens);
      d.y_train.push_back(d.encoding.id(r.diagnosis));
    } else {
      test_docs.push_back(r.tokens);
      d.y_test.push_back(d.encoding.id(r.diagnosis));
    }
  }
  d.tfidf = TfidfModel::fit(train_docs);
  d.X_train = d.tfidf.transform_all(train_docs);
  d.X_test = d.tfidf.transform_all(test_docs);
  return d;
}

inline double micro_f_of(const TrainedModel& m, const std::vector<SparseVector>& X,
                         const std::vector<std::size_t>& y) {
  const auto pred = m.predict_all(X);
  return micro_f(tally(y, pred, m.n_classes()));
}

// ------------------------------------------------------------------ LDA

/// `n_docs` documents alternating between two disjoint 10-word vocabularies.
inline std::vector<Tokens> two_group_docs(std::size_t n_docs, std::size_t length,
                                          std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Tokens> docs(n_docs);
  for (std::size_t d = 0; d < n_docs; ++d) {
    const char group = d % 2 == 0 ? 'a' : 'b';
    for (std::size_t i = 0; i < length; ++i) {
      docs[d].push_back(std::string(1, group) + std::to_string(rng.uniform_index(10)));
    }
  }
  return docs;
}

inline double max_row_sum_error(const std::vector<std::vector<double>>& rows) {
  double worst = 0.0;
  for (const auto& row : rows) {
    double s = 0.0;
    for (double v : row) s += v;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

// ------------------------------------------------------ small utilities

/// Relative error ||a - b|| / max(||a||, ||b||, tiny).
inline double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-300});
}

inline SparseVector random_sparse(Rng& rng, std::size_t dim, std::size_t nnz) {
  std::vector<SparseEntry> e;
  for (std::size_t k = 0; k < nnz; ++k) {
    e.push_back({static_cast<std::uint32_t>(rng.uniform_index(dim)), 0.1 + rng.uniform_real()});
  }
  return SparseVector::from_unsorted(std::move(e));
}

}  // namespace pathtext::testing
