#include "pathtext/preprocess.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "pathtext/corpus.hpp"
#include "pathtext/error.hpp"
#include "pathtext/text_io.hpp"

namespace pathtext {

void PreprocessConfig::validate() const {
  if (bigram_min_count < 1) throw ValidationError("bigram_min_count must be >= 1");
  if (!std::isfinite(bigram_min_score)) throw ValidationError("bigram_min_score must be finite");
  if (!(low_df_threshold >= 0.0 && low_df_threshold < high_df_threshold &&
        high_df_threshold <= 1.0)) {
    throw ValidationError("need 0 <= low_df_threshold < high_df_threshold <= 1");
  }
}

void BigramTable::insert(std::string first, std::string second, BigramStats stats) {
  entries_[{std::move(first), std::move(second)}] = stats;
}

bool BigramTable::contains(std::string_view first, std::string_view second) const {
  // Heterogeneous lookup on pair<string,string> needs a materialized key.
  return entries_.find(Key{std::string(first), std::string(second)}) != entries_.end();
}

std::string BigramTable::serialize() const {
  std::ostringstream out;
  for (const auto& [key, stats] : entries_) {
    out << key.first << '\t' << key.second << '\t' << stats.count << '\t'
        << format_double_exact(stats.score) << '\n';
  }
  return out.str();
}

BigramTable BigramTable::deserialize(std::string_view text) {
  BigramTable table;
  std::size_t line_no = 0;
  for (const std::string& line : split_lines(text)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_whitespace(line);
    if (fields.size() != 4) {
      throw FormatError("bigram table line " + std::to_string(line_no) + ": expected 4 fields");
    }
    table.insert(fields[0], fields[1], {parse_size(fields[2]), parse_double(fields[3])});
  }
  return table;
}

Tokens normalize_and_tokenize(std::string_view text) {
  Tokens tokens;
  std::string current;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      current.push_back(static_cast<char>(c));
    } else if (c >= 'A' && c <= 'Z') {
      current.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Tokens remove_stopwords(const Tokens& tokens, const PreprocessConfig& cfg) {
  if (cfg.stopwords.empty()) throw ValidationError("stopword list is empty");
  Tokens out;
  out.reserve(tokens.size());
  for (const std::string& t : tokens) {
    if (!cfg.stopwords.contains(t)) out.push_back(t);
  }
  return out;
}

BigramTable detect_bigrams(const std::vector<Tokens>& docs, const PreprocessConfig& cfg) {
  std::unordered_map<std::string, std::size_t> unigrams;
  std::map<BigramTable::Key, std::size_t> pairs;
  std::size_t total_unigrams = 0;
  std::size_t total_pairs = 0;
  for (const Tokens& doc : docs) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      ++unigrams[doc[i]];
      ++total_unigrams;
      if (i + 1 < doc.size()) {
        ++pairs[{doc[i], doc[i + 1]}];
        ++total_pairs;
      }
    }
  }

  BigramTable table;
  if (total_pairs == 0) return table;
  const double u = static_cast<double>(total_unigrams);
  const double p = static_cast<double>(total_pairs);
  for (const auto& [key, count] : pairs) {
    if (count < cfg.bigram_min_count) continue;
    const double ca = static_cast<double>(unigrams.at(key.first));
    const double cb = static_cast<double>(unigrams.at(key.second));
    const double pmi = std::log(static_cast<double>(count) / p) - std::log(ca / u) - std::log(cb / u);
    if (pmi >= cfg.bigram_min_score) table.insert(key.first, key.second, {count, pmi});
  }
  return table;
}

Tokens join_bigrams(const Tokens& tokens, const BigramTable& table) {
  if (table.empty()) return tokens;
  Tokens out;
  out.reserve(tokens.size());
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (i + 1 < tokens.size() && table.contains(tokens[i], tokens[i + 1])) {
      out.push_back(tokens[i] + "-" + tokens[i + 1]);
      i += 2;
    } else {
      out.push_back(tokens[i]);
      ++i;
    }
  }
  return out;
}

FrequencyFilterResult frequency_filter(const std::vector<TokenizedReport>& docs,
                                       const PreprocessConfig& cfg) {
  cfg.validate();
  FrequencyFilterResult result;
  if (docs.empty()) return result;

  // Category -> slot, in sorted label order.
  std::map<std::string, std::size_t> category_slot;
  for (const TokenizedReport& d : docs) {
    if (d.diagnosis.empty()) throw ValidationError("document without diagnosis: " + d.id);
    category_slot.emplace(d.diagnosis, 0);
  }
  std::size_t slot = 0;
  for (auto& [label, s] : category_slot) s = slot++;
  const std::size_t n_categories = category_slot.size();

  std::vector<std::size_t> docs_per_category(n_categories, 0);
  // word -> per-category document counts
  std::map<std::string, std::vector<std::size_t>, std::less<>> df;
  for (const TokenizedReport& d : docs) {
    const std::size_t c = category_slot.at(d.diagnosis);
    ++docs_per_category[c];
    std::set<std::string_view> distinct(d.tokens.begin(), d.tokens.end());
    for (std::string_view w : distinct) {
      auto it = df.find(w);
      if (it == df.end()) {
        it = df.emplace(std::string(w), std::vector<std::size_t>(n_categories, 0)).first;
      }
      ++it->second[c];
    }
  }

  const double n_docs = static_cast<double>(docs.size());
  FrequencyFilterStats& stats = result.stats;
  stats.vocabulary_before = df.size();
  for (const auto& [word, counts] : df) {
    std::size_t rare_categories = 0;
    std::size_t total = 0;
    for (std::size_t c = 0; c < n_categories; ++c) {
      const double frac = static_cast<double>(counts[c]) / static_cast<double>(docs_per_category[c]);
      if (frac < cfg.low_df_threshold) ++rare_categories;
      total += counts[c];
    }
    const bool low = cfg.low_df_rule == LowDfRule::Every ? rare_categories == n_categories
                                                          : rare_categories > 0;
    const bool high = static_cast<double>(total) / n_docs > cfg.high_df_threshold;
    if (low) ++stats.removed_low_df;
    if (high) ++stats.removed_high_df;
    if (low && high) ++stats.removed_both;
    if (!low && !high) result.kept_vocabulary.insert(word);
  }
  stats.kept = result.kept_vocabulary.size();

  result.docs.reserve(docs.size());
  for (const TokenizedReport& d : docs) {
    TokenizedReport filtered{d.id, restrict_to_vocabulary(d.tokens, result.kept_vocabulary),
                             d.diagnosis};
    if (filtered.tokens.empty()) {
      result.warnings.push_back("report " + d.id + " has no tokens left after frequency filtering");
    }
    result.docs.push_back(std::move(filtered));
  }
  return result;
}

Tokens restrict_to_vocabulary(const Tokens& tokens, const std::set<std::string>& vocabulary) {
  Tokens out;
  out.reserve(tokens.size());
  for (const std::string& t : tokens) {
    if (vocabulary.contains(t)) out.push_back(t);
  }
  return out;
}

Tokens tokenize_report(std::string_view text, const PreprocessConfig& cfg, const BigramTable& table) {
  return join_bigrams(remove_stopwords(normalize_and_tokenize(text), cfg), table);
}

std::pair<PreprocessModel, std::vector<TokenizedReport>> fit_preprocess(
    const Corpus& train, const PreprocessConfig& cfg) {
  cfg.validate();
  std::vector<Tokens> stripped;
  stripped.reserve(train.size());
  for (const Report& r : train.reports()) {
    stripped.push_back(remove_stopwords(normalize_and_tokenize(r.text), cfg));
  }

  PreprocessModel model;
  model.bigrams = detect_bigrams(stripped, cfg);

  std::vector<TokenizedReport> joined;
  joined.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    joined.push_back({train[i].id, join_bigrams(stripped[i], model.bigrams), train[i].diagnosis});
  }

  FrequencyFilterResult filtered = frequency_filter(joined, cfg);
  model.kept_vocabulary = std::move(filtered.kept_vocabulary);
  model.stats = filtered.stats;
  model.warnings = std::move(filtered.warnings);
  return {std::move(model), std::move(filtered.docs)};
}

std::vector<TokenizedReport> apply_preprocess(const Corpus& corpus, const PreprocessConfig& cfg,
                                              const PreprocessModel& model) {
  std::vector<TokenizedReport> out;
  out.reserve(corpus.size());
  for (const Report& r : corpus.reports()) {
    out.push_back({r.id,
                   restrict_to_vocabulary(tokenize_report(r.text, cfg, model.bigrams),
                                          model.kept_vocabulary),
                   r.diagnosis});
  }
  return out;
}

}  // namespace pathtext
