#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pathtext {

struct SparseEntry {
  std::uint32_t index = 0;
  double weight = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Sorted index/weight pairs. Indices strictly increase and no stored weight
/// is zero.
class SparseVector {
 public:
  SparseVector() = default;

  /// Validates ordering and drops nothing: throws std::invalid_argument when
  /// indices are not strictly increasing or a weight is zero or non-finite.
  explicit SparseVector(std::vector<SparseEntry> entries);

  /// Sorts by index, sums duplicates, and drops zeros.
  static SparseVector from_unsorted(std::vector<SparseEntry> entries);

  std::span<const SparseEntry> entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// One past the largest stored index (0 when empty).
  std::uint32_t min_dimension() const { return entries_.empty() ? 0 : entries_.back().index + 1; }

  /// Weight at `index`, 0 if absent.
  double at(std::uint32_t index) const;

  double squared_norm() const;

  /// Dot product with a dense vector; indices beyond dense.size() contribute 0.
  double dot(std::span<const double> dense) const;

  /// Multiplies every weight by a positive factor.
  SparseVector scaled(double factor) const;

  /// Space-separated `index:weight` pairs with exact round-trip weights.
  std::string to_string() const;
  static SparseVector parse(std::string_view text);

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::vector<SparseEntry> entries_;
};

/// Sparse dot product over the intersection of supports.
double dot(const SparseVector& a, const SparseVector& b);

/// ||a - b||^2 over the union of supports.
double squared_distance(const SparseVector& a, const SparseVector& b);

}  // namespace pathtext
