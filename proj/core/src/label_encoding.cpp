#include "pathtext/label_encoding.hpp"

#include <algorithm>

#include "pathtext/error.hpp"

namespace pathtext {

LabelEncoding::LabelEncoding(std::vector<std::string> labels) : classes_(std::move(labels)) {
  std::sort(classes_.begin(), classes_.end());
  classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
}

std::size_t LabelEncoding::id(std::string_view label) const {
  auto it = std::lower_bound(classes_.begin(), classes_.end(), label);
  if (it == classes_.end() || *it != label) {
    throw ValidationError("unknown label: " + std::string(label));
  }
  return static_cast<std::size_t>(it - classes_.begin());
}

bool LabelEncoding::contains(std::string_view label) const {
  return std::binary_search(classes_.begin(), classes_.end(), label);
}

std::vector<std::size_t> LabelEncoding::encode(const std::vector<std::string>& labels) const {
  std::vector<std::size_t> ids;
  ids.reserve(labels.size());
  for (const std::string& l : labels) ids.push_back(id(l));
  return ids;
}

}  // namespace pathtext
