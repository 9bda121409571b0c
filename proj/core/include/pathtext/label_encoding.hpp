#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pathtext {

/// Bijection between label strings and dense class ids, in lexicographic
/// label order.
class LabelEncoding {
 public:
  LabelEncoding() = default;

  /// Sorts and deduplicates `labels`.
  explicit LabelEncoding(std::vector<std::string> labels);

  std::size_t size() const { return classes_.size(); }
  const std::vector<std::string>& classes() const { return classes_; }
  const std::string& label(std::size_t id) const { return classes_.at(id); }

  /// Throws ValidationError for an unknown label.
  std::size_t id(std::string_view label) const;
  bool contains(std::string_view label) const;

  std::vector<std::size_t> encode(const std::vector<std::string>& labels) const;

  friend bool operator==(const LabelEncoding&, const LabelEncoding&) = default;

 private:
  std::vector<std::string> classes_;
};

}  // namespace pathtext
