#pragma once

#include <string>
#include <vector>

#include "pathtext/sparse.hpp"
#include "pathtext/vectorizer.hpp"

namespace pathtext {

inline constexpr std::size_t kDefaultTopKeywords = 50;

struct Keyword {
  std::string term;
  double weight = 0.0;

  friend bool operator==(const Keyword&, const Keyword&) = default;
};

/// A report's highest-weighted terms, in non-increasing weight order.
struct KeywordSet {
  std::string report_id;
  std::vector<Keyword> keywords;

  std::size_t size() const { return keywords.size(); }
  bool empty() const { return keywords.empty(); }
};

/// The n highest TF-IDF entries of `vec`, ties broken by term. Weights are
/// copied from the vector unchanged. Throws ValidationError when n == 0.
KeywordSet top_keywords(const SparseVector& vec, const TfidfModel& model,
                        std::size_t n = kDefaultTopKeywords, std::string report_id = {});

}  // namespace pathtext
