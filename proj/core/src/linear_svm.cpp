#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pathtext/binary_solvers.hpp"
#include "pathtext/random.hpp"
#include "trainers.hpp"

namespace pathtext {

namespace {

double primal_svm_objective(std::span<const SparseVector> X, std::span<const int> labels,
                            std::span<const double> w, double bias, double C) {
  double reg = bias * bias;
  for (double v : w) reg += v * v;
  double hinge = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    hinge += std::max(0.0, 1.0 - labels[i] * (X[i].dot(w) + bias));
  }
  return 0.5 * reg + C * hinge;
}

}  // namespace

BinaryLinearSolution solve_linear_svm_dual(std::span<const SparseVector> X,
                                           std::span<const int> labels, std::size_t n_features,
                                           double C, double tol, int max_iter, bool shrinking,
                                           std::uint64_t seed) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t l = X.size();
  std::vector<double> w(n_features, 0.0);
  double bias = 0.0;
  std::vector<double> alpha(l, 0.0);
  std::vector<double> qd(l);
  for (std::size_t i = 0; i < l; ++i) qd[i] = X[i].squared_norm() + 1.0;

  std::vector<std::size_t> index(l);
  std::iota(index.begin(), index.end(), 0);
  std::size_t active = l;
  double pg_max_old = kInf;
  double pg_min_old = -kInf;
  Rng rng(seed);

  int iter = 0;
  while (iter < max_iter) {
    double pg_max_new = -kInf;
    double pg_min_new = kInf;
    rng.shuffle(std::span<std::size_t>(index.data(), active));

    for (std::size_t s = 0; s < active; ++s) {
      const std::size_t i = index[s];
      const double yi = labels[i];
      const double G = yi * (X[i].dot(w) + bias) - 1.0;
      double pg = 0.0;
      if (alpha[i] == 0.0) {
        if (shrinking && G > pg_max_old) {
          --active;
          std::swap(index[s], index[active]);
          --s;
          continue;
        }
        if (G < 0.0) pg = G;
      } else if (alpha[i] == C) {
        if (shrinking && G < pg_min_old) {
          --active;
          std::swap(index[s], index[active]);
          --s;
          continue;
        }
        if (G > 0.0) pg = G;
      } else {
        pg = G;
      }
      pg_max_new = std::max(pg_max_new, pg);
      pg_min_new = std::min(pg_min_new, pg);

      if (std::abs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::min(std::max(alpha[i] - G / qd[i], 0.0), C);
        const double d = (alpha[i] - old) * yi;
        for (const SparseEntry& e : X[i].entries()) w[e.index] += d * e.weight;
        bias += d;
      }
    }
    ++iter;

    if (pg_max_new - pg_min_new <= tol) {
      if (active == l) break;
      // Converged on the shrunk set; verify on the full set.
      active = l;
      pg_max_old = kInf;
      pg_min_old = -kInf;
      continue;
    }
    pg_max_old = pg_max_new <= 0.0 ? kInf : pg_max_new;
    pg_min_old = pg_min_new >= 0.0 ? -kInf : pg_min_new;
  }

  BinaryLinearSolution sol;
  sol.objective = primal_svm_objective(X, labels, w, bias, C);
  sol.weights = std::move(w);
  sol.bias = bias;
  sol.iterations = static_cast<std::size_t>(iter);
  return sol;
}

namespace detail {

std::vector<int> one_vs_rest_labels(std::span<const std::size_t> y, std::size_t k) {
  std::vector<int> labels(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) labels[i] = y[i] == k ? 1 : -1;
  return labels;
}

LinearParams train_linear_svm(std::span<const SparseVector> X, std::span<const std::size_t> y,
                              std::size_t n_classes, std::size_t n_features,
                              const ClassifierSpec& spec, TrainingInfo& info) {
  LinearParams params;
  params.weights.reserve(n_classes);
  params.bias.reserve(n_classes);
  const std::uint64_t seed = derive_seed(spec.seed, "svm_linear");
  for (std::size_t k = 0; k < n_classes; ++k) {
    const std::vector<int> labels = one_vs_rest_labels(y, k);
    BinaryLinearSolution sol = solve_linear_svm_dual(X, labels, n_features, spec.C, spec.tol,
                                                     spec.max_iter, spec.shrinking, seed);
    info.iterations = std::max(info.iterations, sol.iterations);
    info.final_objective += sol.objective;
    params.weights.push_back(std::move(sol.weights));
    params.bias.push_back(sol.bias);
  }
  return params;
}

}  // namespace detail

}  // namespace pathtext
