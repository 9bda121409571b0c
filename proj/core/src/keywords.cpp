#include "pathtext/keywords.hpp"

#include <algorithm>

#include "pathtext/error.hpp"

namespace pathtext {

KeywordSet top_keywords(const SparseVector& vec, const TfidfModel& model, std::size_t n,
                        std::string report_id) {
  if (n == 0) throw ValidationError("top_keywords: n must be >= 1");
  const Vocabulary& vocab = model.vocabulary();
  std::vector<Keyword> all;
  all.reserve(vec.nnz());
  for (const SparseEntry& e : vec.entries()) {
    if (e.index >= vocab.size()) {
      throw DimensionError("top_keywords: vector index beyond the model's vocabulary");
    }
    all.push_back({vocab.term(e.index), e.weight});
  }
  auto before = [](const Keyword& a, const Keyword& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.term < b.term;
  };
  const std::size_t keep = std::min(n, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), before);
  all.resize(keep);
  return KeywordSet{std::move(report_id), std::move(all)};
}

}  // namespace pathtext
