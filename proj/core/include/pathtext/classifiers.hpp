#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pathtext/boosted_trees.hpp"
#include "pathtext/label_encoding.hpp"
#include "pathtext/sparse.hpp"

namespace pathtext {

enum class ClassifierKind { SvmLinear, SvmRbf, LogReg, Gbt };

std::string_view to_string(ClassifierKind kind);

/// Accepts "svm_linear", "svm_rbf", "logreg", "gbt". Throws ValidationError.
ClassifierKind parse_classifier_kind(std::string_view name);

inline constexpr ClassifierKind kAllClassifierKinds[] = {
    ClassifierKind::SvmLinear, ClassifierKind::SvmRbf, ClassifierKind::LogReg, ClassifierKind::Gbt};

/// Hyperparameters for every classifier family. Fields that do not apply to
/// `kind` are ignored.
struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::SvmLinear;

  // SVMs and logistic regression.
  double C = 1.0;
  /// RBF width; 0 selects 1 / n_features.
  double gamma = 0.0;
  bool l2_penalty = true;
  /// Active-set pruning in the linear SVM dual solver.
  bool shrinking = false;
  int max_iter = 1000;
  double tol = 1e-4;

  // Boosted trees.
  int max_depth = 6;
  double learning_rate = 0.3;
  int n_rounds = 100;
  double reg_lambda = 1.0;
  double min_child_weight = 1.0;
  /// Stop once the training loss improves by less than `tol` for this many
  /// consecutive rounds; 0 disables early stopping.
  int early_stopping_rounds = 10;

  std::uint64_t seed = 0;

  /// Throws ValidationError on non-positive parameters.
  void validate() const;

  friend bool operator==(const ClassifierSpec&, const ClassifierSpec&) = default;
};

/// One weight row and bias per class.
struct LinearParams {
  std::vector<std::vector<double>> weights;
  std::vector<double> bias;

  friend bool operator==(const LinearParams&, const LinearParams&) = default;
};

/// Kernel expansion over shared support vectors; coef[k][s] = y_s * alpha_s
/// for the k-th one-vs-rest problem and decision = sum coef * K(sv, x) - rho.
struct KernelParams {
  double gamma = 0.0;
  std::vector<SparseVector> support;
  std::vector<std::vector<double>> coef;
  std::vector<double> rho;

  friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

/// Degenerate model trained on a single class.
struct ConstantParams {
  std::size_t class_id = 0;

  friend bool operator==(const ConstantParams&, const ConstantParams&) = default;
};

struct TrainingInfo {
  /// Solver iterations (max over one-vs-rest problems) or boosting rounds.
  std::size_t iterations = 0;
  double final_objective = 0.0;
  /// Training softmax loss after each boosting round (gbt only).
  std::vector<double> loss_history;
  std::vector<std::string> warnings;

  friend bool operator==(const TrainingInfo&, const TrainingInfo&) = default;
};

class TrainedModel {
 public:
  using Params = std::variant<ConstantParams, LinearParams, KernelParams, TreeEnsemble>;

  TrainedModel(ClassifierSpec spec, LabelEncoding encoding, std::size_t n_features, Params params,
               TrainingInfo info);

  ClassifierKind kind() const { return spec_.kind; }
  const ClassifierSpec& spec() const { return spec_; }
  const LabelEncoding& encoding() const { return encoding_; }
  std::size_t n_classes() const { return encoding_.size(); }
  std::size_t n_features() const { return n_features_; }
  const Params& params() const { return params_; }
  const TrainingInfo& info() const { return info_; }
  bool is_constant() const { return std::holds_alternative<ConstantParams>(params_); }

  /// Per-class scores. Probabilities (summing to 1) for logreg and gbt, raw
  /// margins for the SVMs, one-hot for a constant model.
  std::vector<double> decision_scores(const SparseVector& x) const;

  /// Argmax of decision_scores, lowest class id on ties.
  std::size_t predict(const SparseVector& x) const;
  std::vector<std::size_t> predict_all(std::span<const SparseVector> xs) const;

  /// Versioned flat-text format; serialize(deserialize(s)) == s.
  std::string serialize() const;
  static TrainedModel deserialize(std::string_view text);

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;

 private:
  ClassifierSpec spec_;
  LabelEncoding encoding_;
  std::size_t n_features_ = 0;
  Params params_;
  TrainingInfo info_;
};

/// Trains one classifier. `y` holds class ids into `encoding`; every vector
/// index must be < n_features (DimensionError otherwise). Input with a single
/// distinct class yields a constant model and a warning.
TrainedModel train(std::span<const SparseVector> X, std::span<const std::size_t> y,
                   const LabelEncoding& encoding, std::size_t n_features,
                   const ClassifierSpec& spec);

/// Index of the largest score; the lowest index wins ties.
std::size_t argmax(std::span<const double> scores);

/// exp(-gamma * ||x1 - x2||^2).
double kernel_rbf(const SparseVector& x1, const SparseVector& x2, double gamma);

}  // namespace pathtext
