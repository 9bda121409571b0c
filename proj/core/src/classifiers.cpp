#include "pathtext/classifiers.hpp"

#include <cmath>
#include <set>

#include "pathtext/error.hpp"
#include "trainers.hpp"

namespace pathtext {

std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::SvmLinear: return "svm_linear";
    case ClassifierKind::SvmRbf: return "svm_rbf";
    case ClassifierKind::LogReg: return "logreg";
    case ClassifierKind::Gbt: return "gbt";
  }
  return "unknown";
}

ClassifierKind parse_classifier_kind(std::string_view name) {
  for (ClassifierKind k : kAllClassifierKinds) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown classifier kind '" + std::string(name) +
                        "' (expected svm_linear, svm_rbf, logreg, or gbt)");
}

void ClassifierSpec::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string("classifier parameter ") + name + " must be positive");
    }
  };
  positive(C, "C");
  if (gamma < 0.0 || !std::isfinite(gamma)) throw ValidationError("gamma must be >= 0");
  positive(tol, "tol");
  if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
  if (max_depth < 0) throw ValidationError("max_depth must be >= 0");
  positive(learning_rate, "learning_rate");
  if (n_rounds < 0) throw ValidationError("n_rounds must be >= 0");
  if (reg_lambda < 0.0) throw ValidationError("reg_lambda must be >= 0");
  if (min_child_weight < 0.0) throw ValidationError("min_child_weight must be >= 0");
  if (early_stopping_rounds < 0) throw ValidationError("early_stopping_rounds must be >= 0");
}

TrainedModel::TrainedModel(ClassifierSpec spec, LabelEncoding encoding, std::size_t n_features,
                           Params params, TrainingInfo info)
    : spec_(spec),
      encoding_(std::move(encoding)),
      n_features_(n_features),
      params_(std::move(params)),
      info_(std::move(info)) {}

std::size_t argmax(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

namespace {

double sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace

std::vector<double> TrainedModel::decision_scores(const SparseVector& x) const {
  const std::size_t K = n_classes();
  std::vector<double> scores(K, 0.0);
  if (const auto* c = std::get_if<ConstantParams>(&params_)) {
    scores[c->class_id] = 1.0;
  } else if (const auto* lin = std::get_if<LinearParams>(&params_)) {
    for (std::size_t k = 0; k < K; ++k) scores[k] = x.dot(lin->weights[k]) + lin->bias[k];
    if (spec_.kind == ClassifierKind::LogReg) {
      double total = 0.0;
      for (double& s : scores) {
        s = sigmoid(s);
        total += s;
      }
      for (double& s : scores) s /= total;
    }
  } else if (const auto* ker = std::get_if<KernelParams>(&params_)) {
    std::vector<double> kx(ker->support.size());
    for (std::size_t s = 0; s < kx.size(); ++s) kx[s] = kernel_rbf(ker->support[s], x, ker->gamma);
    for (std::size_t k = 0; k < K; ++k) {
      double v = -ker->rho[k];
      for (std::size_t s = 0; s < kx.size(); ++s) v += ker->coef[k][s] * kx[s];
      scores[k] = v;
    }
  } else {
    scores = softmax(std::get<TreeEnsemble>(params_).raw_scores(x));
  }
  return scores;
}

std::size_t TrainedModel::predict(const SparseVector& x) const {
  return argmax(decision_scores(x));
}

std::vector<std::size_t> TrainedModel::predict_all(std::span<const SparseVector> xs) const {
  std::vector<std::size_t> out;
  out.reserve(xs.size());
  for (const SparseVector& x : xs) out.push_back(predict(x));
  return out;
}

TrainedModel train(std::span<const SparseVector> X, std::span<const std::size_t> y,
                   const LabelEncoding& encoding, std::size_t n_features,
                   const ClassifierSpec& spec) {
  spec.validate();
  if (X.size() != y.size()) {
    throw DimensionError("train: " + std::to_string(X.size()) + " vectors but " +
                         std::to_string(y.size()) + " labels");
  }
  if (X.empty()) throw FitError("train: no training data");
  if (encoding.size() == 0) throw FitError("train: empty label encoding");
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i].min_dimension() > n_features) {
      throw DimensionError("train: vector " + std::to_string(i) + " has index beyond dimension " +
                           std::to_string(n_features));
    }
    if (y[i] >= encoding.size()) {
      throw DimensionError("train: class id " + std::to_string(y[i]) + " out of range");
    }
  }

  TrainingInfo info;
  const std::set<std::size_t> present(y.begin(), y.end());
  if (present.size() == 1) {
    const std::size_t only = *present.begin();
    info.warnings.push_back("training data has a single class ('" + encoding.label(only) +
                            "'); using a constant model");
    return TrainedModel(spec, encoding, n_features, ConstantParams{only}, std::move(info));
  }

  const std::size_t K = encoding.size();
  TrainedModel::Params params;
  switch (spec.kind) {
    case ClassifierKind::SvmLinear:
      params = detail::train_linear_svm(X, y, K, n_features, spec, info);
      break;
    case ClassifierKind::LogReg:
      params = detail::train_logreg(X, y, K, n_features, spec, info);
      break;
    case ClassifierKind::SvmRbf:
      params = detail::train_kernel_svm(X, y, K, n_features, spec, info);
      break;
    case ClassifierKind::Gbt:
      params = detail::train_boosted_trees(X, y, K, n_features, spec, info);
      break;
  }
  return TrainedModel(spec, encoding, n_features, std::move(params), std::move(info));
}

}  // namespace pathtext
