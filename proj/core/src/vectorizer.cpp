#include "pathtext/vectorizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "pathtext/error.hpp"
#include "pathtext/text_io.hpp"

namespace pathtext {

namespace {
constexpr std::string_view kMagic = "pathtext-tfidf";
constexpr int kFormatVersion = 1;
}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq,
                       std::size_t n_docs)
    : terms_(std::move(terms)), doc_freq_(std::move(doc_freq)), n_docs_(n_docs) {
  if (terms_.size() != doc_freq_.size()) {
    throw ValidationError("vocabulary: terms and doc_freq differ in length");
  }
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && !(terms_[i - 1] < terms_[i])) {
      throw ValidationError("vocabulary: terms must be unique and sorted");
    }
    if (doc_freq_[i] < 1 || doc_freq_[i] > n_docs_) {
      throw ValidationError("vocabulary: doc_freq out of range for term " + terms_[i]);
    }
    index_.emplace(terms_[i], i);
  }
}

std::optional<std::size_t> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double term_frequency(std::string_view term, const Tokens& doc) {
  if (doc.empty()) throw ValidationError("term frequency of an empty document is undefined");
  auto count = std::count(doc.begin(), doc.end(), term);
  return static_cast<double>(count) / static_cast<double>(doc.size());
}

TfidfModel::TfidfModel(Vocabulary vocabulary) : vocabulary_(std::move(vocabulary)) {
  idf_.resize(vocabulary_.size());
  const double n = static_cast<double>(vocabulary_.n_docs());
  for (std::size_t i = 0; i < idf_.size(); ++i) {
    idf_[i] = std::log(n / static_cast<double>(vocabulary_.doc_freq(i)));
  }
}

TfidfModel TfidfModel::fit(const std::vector<Tokens>& train_docs) {
  if (train_docs.empty()) throw FitError("TF-IDF fit needs at least one document");
  std::map<std::string, std::size_t, std::less<>> df;
  for (const Tokens& doc : train_docs) {
    std::vector<std::string_view> distinct(doc.begin(), doc.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (std::string_view t : distinct) {
      auto it = df.find(t);
      if (it == df.end()) {
        df.emplace(std::string(t), 1);
      } else {
        ++it->second;
      }
    }
  }
  if (df.empty()) throw FitError("TF-IDF fit: every training document is empty");
  std::vector<std::string> terms;
  std::vector<std::size_t> freq;
  terms.reserve(df.size());
  freq.reserve(df.size());
  for (auto& [term, count] : df) {
    terms.push_back(term);
    freq.push_back(count);
  }
  return TfidfModel(Vocabulary(std::move(terms), std::move(freq), train_docs.size()));
}

std::optional<double> TfidfModel::idf(std::string_view term) const {
  auto index = vocabulary_.find(term);
  if (!index) return std::nullopt;
  return idf_[*index];
}

SparseVector TfidfModel::transform(const Tokens& doc) const {
  if (doc.empty()) return {};
  std::map<std::size_t, std::size_t> counts;
  for (const std::string& token : doc) {
    if (auto index = vocabulary_.find(token)) ++counts[*index];
  }
  const double length = static_cast<double>(doc.size());
  std::vector<SparseEntry> entries;
  entries.reserve(counts.size());
  for (auto [index, count] : counts) {
    const double weight = (static_cast<double>(count) / length) * idf_[index];
    if (weight > 0.0) entries.push_back({static_cast<std::uint32_t>(index), weight});
  }
  return SparseVector(std::move(entries));
}

std::vector<SparseVector> TfidfModel::transform_all(const std::vector<Tokens>& docs) const {
  std::vector<SparseVector> out;
  out.reserve(docs.size());
  for (const Tokens& d : docs) out.push_back(transform(d));
  return out;
}

std::string TfidfModel::serialize() const {
  std::ostringstream out;
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "n_docs " << vocabulary_.n_docs() << '\n';
  out << "terms " << vocabulary_.size() << '\n';
  out << "log " << kLogBase << '\n';
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    const std::string& t = vocabulary_.term(i);
    if (t.find_first_of(" \t\r\n") != std::string::npos) {
      throw FormatError("term contains whitespace and cannot be serialized: '" + t + "'");
    }
    out << t << '\t' << i << '\t' << vocabulary_.doc_freq(i) << '\n';
  }
  return out.str();
}

TfidfModel TfidfModel::deserialize(std::string_view text) {
  auto lines = split_lines(text);
  auto header = [&](std::size_t i, std::string_view key) -> std::string {
    if (i >= lines.size()) throw FormatError("tfidf model: truncated header");
    auto f = split_whitespace(lines[i]);
    if (f.size() != 2 || f[0] != key) {
      throw FormatError("tfidf model: expected '" + std::string(key) + "' on line " +
                        std::to_string(i + 1));
    }
    return f[1];
  };
  if (header(0, kMagic) != std::to_string(kFormatVersion)) {
    throw FormatError("tfidf model: unsupported format version");
  }
  const std::size_t n_docs = parse_size(header(1, "n_docs"));
  const std::size_t n_terms = parse_size(header(2, "terms"));
  if (header(3, "log") != kLogBase) throw FormatError("tfidf model: unsupported log base");
  if (lines.size() < 4 + n_terms) throw FormatError("tfidf model: truncated term table");

  std::vector<std::string> terms;
  std::vector<std::size_t> df;
  terms.reserve(n_terms);
  df.reserve(n_terms);
  for (std::size_t i = 0; i < n_terms; ++i) {
    auto f = split_whitespace(lines[4 + i]);
    if (f.size() != 3 || parse_size(f[1]) != i) {
      throw FormatError("tfidf model: bad term line " + std::to_string(5 + i));
    }
    terms.push_back(std::move(f[0]));
    df.push_back(parse_size(f[2]));
  }
  try {
    return TfidfModel(Vocabulary(std::move(terms), std::move(df), n_docs));
  } catch (const ValidationError& e) {
    throw FormatError(std::string("tfidf model: ") + e.what());
  }
}

}  // namespace pathtext
