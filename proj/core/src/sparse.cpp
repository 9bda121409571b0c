#include "pathtext/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pathtext/error.hpp"
#include "pathtext/text_io.hpp"

namespace pathtext {

SparseVector::SparseVector(std::vector<SparseEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].weight == 0.0 || !std::isfinite(entries_[i].weight)) {
      throw std::invalid_argument("SparseVector: zero or non-finite weight");
    }
    if (i > 0 && entries_[i - 1].index >= entries_[i].index) {
      throw std::invalid_argument("SparseVector: indices must be strictly increasing");
    }
  }
}

SparseVector SparseVector::from_unsorted(std::vector<SparseEntry> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  std::vector<SparseEntry> merged;
  merged.reserve(entries.size());
  for (const SparseEntry& e : entries) {
    if (!merged.empty() && merged.back().index == e.index) {
      merged.back().weight += e.weight;
    } else {
      merged.push_back(e);
    }
  }
  std::erase_if(merged, [](const SparseEntry& e) { return e.weight == 0.0; });
  return SparseVector(std::move(merged));
}

double SparseVector::at(std::uint32_t index) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const SparseEntry& e, std::uint32_t i) { return e.index < i; });
  return it != entries_.end() && it->index == index ? it->weight : 0.0;
}

double SparseVector::squared_norm() const {
  double s = 0.0;
  for (const SparseEntry& e : entries_) s += e.weight * e.weight;
  return s;
}

double SparseVector::dot(std::span<const double> dense) const {
  double s = 0.0;
  for (const SparseEntry& e : entries_) {
    if (e.index < dense.size()) s += e.weight * dense[e.index];
  }
  return s;
}

SparseVector SparseVector::scaled(double factor) const {
  SparseVector out = *this;
  for (SparseEntry& e : out.entries_) e.weight *= factor;
  return out;
}

std::string SparseVector::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out.push_back(' ');
    out += std::to_string(entries_[i].index);
    out.push_back(':');
    out += format_double_exact(entries_[i].weight);
  }
  return out;
}

SparseVector SparseVector::parse(std::string_view text) {
  std::vector<SparseEntry> entries;
  for (const std::string& item : split_whitespace(text)) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw FormatError("sparse entry without ':': " + item);
    std::size_t index = parse_size(std::string_view(item).substr(0, colon));
    entries.push_back({static_cast<std::uint32_t>(index),
                       parse_double(std::string_view(item).substr(colon + 1))});
  }
  try {
    return SparseVector(std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

double dot(const SparseVector& a, const SparseVector& b) {
  auto ea = a.entries();
  auto eb = b.entries();
  std::size_t i = 0, j = 0;
  double s = 0.0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].index == eb[j].index) {
      s += ea[i++].weight * eb[j++].weight;
    } else if (ea[i].index < eb[j].index) {
      ++i;
    } else {
      ++j;
    }
  }
  return s;
}

double squared_distance(const SparseVector& a, const SparseVector& b) {
  auto ea = a.entries();
  auto eb = b.entries();
  std::size_t i = 0, j = 0;
  double s = 0.0;
  while (i < ea.size() || j < eb.size()) {
    double d;
    if (j == eb.size() || (i < ea.size() && ea[i].index < eb[j].index)) {
      d = ea[i++].weight;
    } else if (i == ea.size() || eb[j].index < ea[i].index) {
      d = eb[j++].weight;
    } else {
      d = ea[i++].weight - eb[j++].weight;
    }
    s += d * d;
  }
  return s;
}

}  // namespace pathtext
