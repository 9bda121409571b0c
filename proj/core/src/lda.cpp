#include "pathtext/lda.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pathtext/classifiers.hpp"
#include "pathtext/error.hpp"
#include "pathtext/text_io.hpp"

namespace pathtext {

double LdaConfig::effective_alpha() const {
  return alpha > 0.0 ? alpha : 50.0 / static_cast<double>(topics);
}

void LdaConfig::validate() const {
  if (topics < 2) throw ValidationError("LDA needs at least 2 topics");
  if (iterations < 1) throw ValidationError("LDA needs at least 1 iteration");
  if (alpha < 0.0 || !std::isfinite(alpha)) throw ValidationError("LDA alpha must be >= 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("LDA beta must be positive");
}

std::optional<std::size_t> TopicModel::word_index(std::string_view term) const {
  auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), term);
  if (it == vocabulary.end() || *it != term) return std::nullopt;
  return static_cast<std::size_t>(it - vocabulary.begin());
}

std::size_t TopicModel::topic_of_word(std::size_t word) const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < n_topics; ++k) {
    if (phi[k][word] > phi[best][word]) best = k;
  }
  return best;
}

std::vector<double> TopicModel::infer_theta(const Tokens& doc, std::size_t iterations,
                                            std::uint64_t seed) const {
  std::vector<std::size_t> words;
  for (const std::string& t : doc) {
    if (auto w = word_index(t)) words.push_back(*w);
  }
  std::vector<std::size_t> counts(n_topics, 0);
  std::vector<std::size_t> z(words.size());
  Rng rng(seed);
  for (std::size_t i = 0; i < words.size(); ++i) {
    z[i] = rng.uniform_index(n_topics);
    ++counts[z[i]];
  }
  std::vector<double> p(n_topics);
  for (std::size_t it = 0; it < iterations && !words.empty(); ++it) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      --counts[z[i]];
      for (std::size_t k = 0; k < n_topics; ++k) {
        p[k] = (static_cast<double>(counts[k]) + alpha) * phi[k][words[i]];
      }
      z[i] = rng.sample_discrete(p);
      ++counts[z[i]];
    }
  }
  std::vector<double> out(n_topics);
  const double denom = static_cast<double>(words.size()) + static_cast<double>(n_topics) * alpha;
  for (std::size_t k = 0; k < n_topics; ++k) {
    out[k] = (static_cast<double>(counts[k]) + alpha) / denom;
  }
  return out;
}

namespace {

constexpr std::string_view kMagic = "pathtext-lda";

std::string join_row(const std::vector<double>& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(' ');
    out += format_double_exact(row[i]);
  }
  return out;
}

std::vector<double> parse_row(const std::string& line, std::size_t expected) {
  auto fields = split_whitespace(line);
  if (fields.size() != expected) throw FormatError("lda model: row has wrong length");
  std::vector<double> row;
  row.reserve(expected);
  for (const auto& f : fields) row.push_back(parse_double(f));
  return row;
}

}  // namespace

std::string TopicModel::serialize() const {
  std::ostringstream out;
  out << kMagic << " 1\n";
  out << "topics " << n_topics << '\n';
  out << "alpha " << format_double_exact(alpha) << '\n';
  out << "beta " << format_double_exact(beta) << '\n';
  out << "iterations " << iterations << '\n';
  out << "seed " << seed << '\n';
  out << "vocabulary " << vocabulary.size() << '\n';
  for (const auto& t : vocabulary) out << t << '\n';
  out << "documents " << theta.size() << '\n';
  for (const auto& row : phi) out << join_row(row) << '\n';
  for (const auto& row : theta) out << join_row(row) << '\n';
  return out.str();
}

TopicModel TopicModel::deserialize(std::string_view text) {
  auto lines = split_lines(text);
  std::size_t pos = 0;
  auto field = [&](std::string_view key) {
    if (pos >= lines.size()) throw FormatError("lda model: truncated");
    auto f = split_whitespace(lines[pos++]);
    if (f.size() != 2 || f[0] != key) {
      throw FormatError("lda model: expected '" + std::string(key) + "'");
    }
    return f[1];
  };
  if (field(kMagic) != "1") throw FormatError("lda model: unsupported version");
  TopicModel m;
  m.n_topics = parse_size(field("topics"));
  m.alpha = parse_double(field("alpha"));
  m.beta = parse_double(field("beta"));
  m.iterations = parse_size(field("iterations"));
  m.seed = parse_size(field("seed"));
  const std::size_t v = parse_size(field("vocabulary"));
  if (pos + v > lines.size()) throw FormatError("lda model: truncated vocabulary");
  m.vocabulary.assign(lines.begin() + static_cast<std::ptrdiff_t>(pos),
                      lines.begin() + static_cast<std::ptrdiff_t>(pos + v));
  pos += v;
  const std::size_t d = parse_size(field("documents"));
  if (pos + m.n_topics + d > lines.size()) throw FormatError("lda model: truncated tables");
  for (std::size_t k = 0; k < m.n_topics; ++k) m.phi.push_back(parse_row(lines[pos++], v));
  for (std::size_t i = 0; i < d; ++i) m.theta.push_back(parse_row(lines[pos++], m.n_topics));
  return m;
}

LdaSampler::LdaSampler(const std::vector<Tokens>& docs, const LdaConfig& cfg)
    : cfg_(cfg), alpha_(cfg.effective_alpha()), rng_(cfg.seed) {
  cfg_.validate();
  for (const Tokens& d : docs) vocab_.insert(vocab_.end(), d.begin(), d.end());
  std::sort(vocab_.begin(), vocab_.end());
  vocab_.erase(std::unique(vocab_.begin(), vocab_.end()), vocab_.end());
  if (vocab_.empty()) throw FitError("LDA: vocabulary of size 0");

  const std::size_t K = cfg_.topics;
  topic_word_.assign(K, std::vector<std::size_t>(vocab_.size(), 0));
  topic_total_.assign(K, 0);
  doc_topic_.assign(docs.size(), std::vector<std::size_t>(K, 0));
  words_.resize(docs.size());
  z_.resize(docs.size());
  weights_.resize(K);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const std::string& t : docs[d]) {
      const auto w = static_cast<std::size_t>(
          std::lower_bound(vocab_.begin(), vocab_.end(), t) - vocab_.begin());
      const std::size_t k = rng_.uniform_index(K);
      words_[d].push_back(w);
      z_[d].push_back(k);
      ++doc_topic_[d][k];
      ++topic_word_[k][w];
      ++topic_total_[k];
    }
  }
}

void LdaSampler::sweep() {
  const std::size_t K = cfg_.topics;
  const double beta = cfg_.beta;
  const double v_beta = static_cast<double>(vocab_.size()) * beta;
  for (std::size_t d = 0; d < words_.size(); ++d) {
    for (std::size_t i = 0; i < words_[d].size(); ++i) {
      const std::size_t w = words_[d][i];
      std::size_t k = z_[d][i];
      --doc_topic_[d][k];
      --topic_word_[k][w];
      --topic_total_[k];
      for (std::size_t t = 0; t < K; ++t) {
        weights_[t] = (static_cast<double>(doc_topic_[d][t]) + alpha_) *
                      (static_cast<double>(topic_word_[t][w]) + beta) /
                      (static_cast<double>(topic_total_[t]) + v_beta);
      }
      k = rng_.sample_discrete(weights_);
      z_[d][i] = k;
      ++doc_topic_[d][k];
      ++topic_word_[k][w];
      ++topic_total_[k];
    }
  }
  ++sweeps_;
}

TopicModel LdaSampler::snapshot() const {
  const std::size_t K = cfg_.topics;
  const std::size_t V = vocab_.size();
  TopicModel m;
  m.n_topics = K;
  m.alpha = alpha_;
  m.beta = cfg_.beta;
  m.iterations = sweeps_;
  m.seed = cfg_.seed;
  m.vocabulary = vocab_;
  m.phi.assign(K, std::vector<double>(V));
  const double v_beta = static_cast<double>(V) * cfg_.beta;
  for (std::size_t k = 0; k < K; ++k) {
    const double denom = static_cast<double>(topic_total_[k]) + v_beta;
    for (std::size_t w = 0; w < V; ++w) {
      m.phi[k][w] = (static_cast<double>(topic_word_[k][w]) + cfg_.beta) / denom;
    }
  }
  m.theta.assign(words_.size(), std::vector<double>(K));
  for (std::size_t d = 0; d < words_.size(); ++d) {
    const double denom = static_cast<double>(words_[d].size()) + static_cast<double>(K) * alpha_;
    for (std::size_t k = 0; k < K; ++k) {
      m.theta[d][k] = (static_cast<double>(doc_topic_[d][k]) + alpha_) / denom;
    }
  }
  return m;
}

bool LdaSampler::counts_consistent() const {
  const std::size_t K = cfg_.topics;
  std::vector<std::vector<std::size_t>> tw(K, std::vector<std::size_t>(vocab_.size(), 0));
  std::vector<std::size_t> tt(K, 0);
  for (std::size_t d = 0; d < words_.size(); ++d) {
    std::vector<std::size_t> dt(K, 0);
    for (std::size_t i = 0; i < words_[d].size(); ++i) {
      ++dt[z_[d][i]];
      ++tw[z_[d][i]][words_[d][i]];
      ++tt[z_[d][i]];
    }
    if (dt != doc_topic_[d]) return false;
    std::size_t total = 0;
    for (std::size_t c : doc_topic_[d]) total += c;
    if (total != words_[d].size()) return false;
  }
  return tw == topic_word_ && tt == topic_total_;
}

double LdaSampler::topic_purity() const {
  double sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t d = 0; d < words_.size(); ++d) {
    if (words_[d].empty()) continue;
    const std::size_t top = *std::max_element(doc_topic_[d].begin(), doc_topic_[d].end());
    sum += static_cast<double>(top) / static_cast<double>(words_[d].size());
    ++counted;
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

TopicModel fit_lda(const std::vector<Tokens>& docs, const LdaConfig& cfg) {
  cfg.validate();
  LdaSampler sampler(docs, cfg);
  for (std::size_t it = 0; it < cfg.iterations; ++it) sampler.sweep();
  return sampler.snapshot();
}

std::vector<std::size_t> assign_topics(const KeywordSet& keywords, const TopicModel& model,
                                       std::span<const double> doc_theta) {
  std::vector<std::size_t> topics;
  topics.reserve(keywords.size());
  const std::size_t fallback = doc_theta.empty() ? 0 : argmax(doc_theta);
  for (const Keyword& kw : keywords.keywords) {
    auto w = model.word_index(kw.term);
    topics.push_back(w ? model.topic_of_word(*w) : fallback);
  }
  return topics;
}

}  // namespace pathtext
