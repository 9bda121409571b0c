#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pathtext/preprocess.hpp"
#include "pathtext/sparse.hpp"

namespace pathtext {

/// Training vocabulary: lexicographically ordered terms with document
/// frequencies.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Terms must be unique and sorted; 1 <= doc_freq[i] <= n_docs.
  /// Throws ValidationError otherwise.
  Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq, std::size_t n_docs);

  std::size_t size() const { return terms_.size(); }
  std::size_t n_docs() const { return n_docs_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::string& term(std::size_t index) const { return terms_[index]; }
  std::size_t doc_freq(std::size_t index) const { return doc_freq_[index]; }
  std::optional<std::size_t> find(std::string_view term) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.terms_ == b.terms_ && a.doc_freq_ == b.doc_freq_ && a.n_docs_ == b.n_docs_;
  }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  std::vector<std::string> terms_;
  std::vector<std::size_t> doc_freq_;
  std::size_t n_docs_ = 0;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
};

/// TF(t,d) = count(t in d) / |d|. Throws ValidationError on an empty document.
double term_frequency(std::string_view term, const Tokens& doc);

/// TF-IDF weighting with natural-log IDF and no smoothing.
class TfidfModel {
 public:
  static constexpr std::string_view kLogBase = "ln";

  TfidfModel() = default;
  explicit TfidfModel(Vocabulary vocabulary);

  /// Builds the vocabulary from training documents. Throws FitError when
  /// there are no documents or every document is empty.
  static TfidfModel fit(const std::vector<Tokens>& train_docs);

  const Vocabulary& vocabulary() const { return vocabulary_; }
  std::size_t dimension() const { return vocabulary_.size(); }

  /// ln(n_docs / doc_freq(term)); std::nullopt for out-of-vocabulary terms.
  std::optional<double> idf(std::string_view term) const;
  double idf_at(std::size_t index) const { return idf_[index]; }

  /// Out-of-vocabulary tokens get no feature but still count toward |d|.
  /// Entries with IDF 0 are not stored. An empty document maps to an empty
  /// vector.
  SparseVector transform(const Tokens& doc) const;
  std::vector<SparseVector> transform_all(const std::vector<Tokens>& docs) const;

  /// Versioned text format; round-trips exactly.
  std::string serialize() const;
  static TfidfModel deserialize(std::string_view text);

  friend bool operator==(const TfidfModel& a, const TfidfModel& b) {
    return a.vocabulary_ == b.vocabulary_;
  }

 private:
  Vocabulary vocabulary_;
  std::vector<double> idf_;
};

/// Free-function form of TfidfModel::idf.
inline std::optional<double> inverse_document_frequency(std::string_view term,
                                                        const TfidfModel& model) {
  return model.idf(term);
}

}  // namespace pathtext
