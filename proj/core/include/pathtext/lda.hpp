#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathtext/keywords.hpp"
#include "pathtext/preprocess.hpp"
#include "pathtext/random.hpp"

namespace pathtext {

struct LdaConfig {
  std::size_t topics = 3;
  /// Document-topic prior; 0 selects 50 / topics.
  double alpha = 0.0;
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;

  double effective_alpha() const;
  /// Throws ValidationError unless topics >= 2, iterations >= 1, and the
  /// priors are positive.
  void validate() const;
};

/// Fitted LDA: phi is topics x vocabulary, theta is documents x topics.
struct TopicModel {
  std::size_t n_topics = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  /// Sorted, unique.
  std::vector<std::string> vocabulary;
  std::vector<std::vector<double>> phi;
  std::vector<std::vector<double>> theta;

  std::optional<std::size_t> word_index(std::string_view term) const;

  /// argmax_k phi[k][word], lowest topic on ties.
  std::size_t topic_of_word(std::size_t word) const;

  /// Topic mixture for an unseen document by Gibbs sampling with phi held
  /// fixed. Out-of-vocabulary tokens are ignored.
  std::vector<double> infer_theta(const Tokens& doc, std::size_t iterations,
                                  std::uint64_t seed) const;

  std::string serialize() const;
  static TopicModel deserialize(std::string_view text);

  friend bool operator==(const TopicModel&, const TopicModel&) = default;
};

/// Collapsed Gibbs sampler state. Exposed so callers can observe the chain
/// between sweeps.
class LdaSampler {
 public:
  /// Throws FitError when the documents contain no tokens.
  LdaSampler(const std::vector<Tokens>& docs, const LdaConfig& cfg);

  /// One pass over every token in document order.
  void sweep();
  std::size_t sweeps() const { return sweeps_; }

  /// phi_k(w) = (n_kw + beta) / (n_k + V beta);
  /// theta_d(k) = (n_dk + alpha) / (|d| + K alpha).
  TopicModel snapshot() const;

  /// True when the count tables agree with the current assignments.
  bool counts_consistent() const;

  /// Mean over non-empty documents of the fraction of tokens assigned to the
  /// document's most frequent topic.
  double topic_purity() const;

  const std::vector<std::vector<std::size_t>>& assignments() const { return z_; }

 private:
  LdaConfig cfg_;
  double alpha_;
  std::vector<std::string> vocab_;
  std::vector<std::vector<std::size_t>> words_;  // per doc, word ids
  std::vector<std::vector<std::size_t>> z_;      // per doc, topic ids
  std::vector<std::vector<std::size_t>> doc_topic_;
  std::vector<std::vector<std::size_t>> topic_word_;
  std::vector<std::size_t> topic_total_;
  std::size_t sweeps_ = 0;
  Rng rng_;
  std::vector<double> weights_;
};

/// Runs cfg.iterations sweeps from a seeded random initialization.
TopicModel fit_lda(const std::vector<Tokens>& docs, const LdaConfig& cfg);

/// Topic per keyword: argmax phi for in-vocabulary terms, otherwise the
/// argmax of `doc_theta`.
std::vector<std::size_t> assign_topics(const KeywordSet& keywords, const TopicModel& model,
                                       std::span<const double> doc_theta);

}  // namespace pathtext
