#pragma once

#include <span>
#include <string>
#include <vector>

namespace pathtext {

/// Per-class true positive, false positive, and false negative counts.
struct ConfusionTally {
  std::vector<std::size_t> tp;
  std::vector<std::size_t> fp;
  std::vector<std::size_t> fn;

  std::size_t n_classes() const { return tp.size(); }
  /// Number of evaluated instances (sum of TP and FN).
  std::size_t n_instances() const;
};

/// Throws ValidationError on a length mismatch, an empty input, or an id
/// >= n_classes.
ConfusionTally tally(std::span<const std::size_t> gold, std::span<const std::size_t> pred,
                     std::size_t n_classes);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
  std::size_t support = 0;  // gold instances
  std::size_t predicted = 0;
};

/// Precision, recall, and F for one class; zero denominators give 0.
ClassScores class_scores(const ConfusionTally& t, std::size_t j);

double micro_precision(const ConfusionTally& t);
double micro_recall(const ConfusionTally& t);

/// Harmonic mean of summed-tally precision and recall; 0 when both are 0.
double micro_f(const ConfusionTally& t);

/// Unweighted mean of per-class F. By default every encoded class counts,
/// including classes with neither gold instances nor predictions (F = 0).
/// With `present_only`, only classes having at least one gold instance or
/// prediction are averaged.
double macro_f(const ConfusionTally& t, bool present_only = false);

struct EvalReport {
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  double micro_f = 0.0;
  double macro_f = 0.0;
  std::size_t n_instances = 0;
  std::vector<std::string> classes;
  std::vector<ClassScores> per_class;

  /// Key/value lines followed by an aligned per-class table.
  std::string to_text() const;
  /// JSON object with the same content.
  std::string to_json() const;
};

EvalReport evaluate(std::span<const std::size_t> gold, std::span<const std::size_t> pred,
                    const std::vector<std::string>& classes, bool macro_present_only = false);

}  // namespace pathtext
