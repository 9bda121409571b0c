#include <cmath>
#include <deque>
#include <numeric>

#include "pathtext/binary_solvers.hpp"
#include "trainers.hpp"

namespace pathtext {

namespace {

// log(1 + exp(-m)) without overflow.
double log1p_exp_neg(double m) {
  return m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

double margin(std::span<const double> theta, const SparseVector& x) {
  const std::size_t d = theta.size() - 1;
  return x.dot(theta.first(d)) + theta[d];
}

double norm2(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

}  // namespace

double logreg_objective(std::span<const double> theta, std::span<const SparseVector> X,
                        std::span<const int> labels, double C, bool l2) {
  double loss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) loss += log1p_exp_neg(labels[i] * margin(theta, X[i]));
  double reg = 0.0;
  if (l2) {
    for (double v : theta) reg += v * v;
  }
  return 0.5 * reg + C * loss;
}

std::vector<double> logreg_gradient(std::span<const double> theta,
                                    std::span<const SparseVector> X,
                                    std::span<const int> labels, double C, bool l2) {
  const std::size_t d = theta.size() - 1;
  std::vector<double> grad(theta.size(), 0.0);
  if (l2) grad.assign(theta.begin(), theta.end());
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double yi = labels[i];
    const double m = yi * margin(theta, X[i]);
    // d/dm log(1 + e^{-m}) = -1 / (1 + e^{m})
    const double coef = -C * yi / (1.0 + std::exp(m));
    for (const SparseEntry& e : X[i].entries()) grad[e.index] += coef * e.weight;
    grad[d] += coef;
  }
  return grad;
}

BinaryLinearSolution solve_logreg_lbfgs(std::span<const SparseVector> X,
                                        std::span<const int> labels, std::size_t n_features,
                                        double C, bool l2, double tol, int max_iter) {
  constexpr std::size_t kMemory = 10;
  constexpr double kArmijo = 1e-4;
  const std::size_t dim = n_features + 1;

  std::vector<double> theta(dim, 0.0);
  double f = logreg_objective(theta, X, labels, C, l2);
  std::vector<double> g = logreg_gradient(theta, X, labels, C, l2);
  const double g0 = norm2(g);
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;

  int iter = 0;
  std::vector<double> dir(dim), trial(dim);
  while (iter < max_iter && norm2(g) > tol * std::max(1.0, g0)) {
    // Two-loop recursion.
    dir = g;
    std::vector<double> a(s_hist.size());
    for (std::size_t j = s_hist.size(); j-- > 0;) {
      a[j] = rho_hist[j] * std::inner_product(s_hist[j].begin(), s_hist[j].end(), dir.begin(), 0.0);
      for (std::size_t t = 0; t < dim; ++t) dir[t] -= a[j] * y_hist[j][t];
    }
    double gamma = 1.0;
    if (!s_hist.empty()) {
      const auto& s = s_hist.back();
      const auto& y = y_hist.back();
      gamma = std::inner_product(s.begin(), s.end(), y.begin(), 0.0) /
              std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
    }
    for (double& v : dir) v *= gamma;
    for (std::size_t j = 0; j < s_hist.size(); ++j) {
      const double b =
          rho_hist[j] * std::inner_product(y_hist[j].begin(), y_hist[j].end(), dir.begin(), 0.0);
      for (std::size_t t = 0; t < dim; ++t) dir[t] += (a[j] - b) * s_hist[j][t];
    }
    for (double& v : dir) v = -v;

    double slope = std::inner_product(g.begin(), g.end(), dir.begin(), 0.0);
    if (slope >= 0.0) {
      // Not a descent direction; restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t t = 0; t < dim; ++t) dir[t] = -g[t];
      slope = -std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
    }

    double step = s_hist.empty() ? std::min(1.0, 1.0 / norm2(g)) : 1.0;
    double f_new = f;
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      for (std::size_t t = 0; t < dim; ++t) trial[t] = theta[t] + step * dir[t];
      f_new = logreg_objective(trial, X, labels, C, l2);
      if (f_new <= f + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++iter;
    if (!accepted) break;

    std::vector<double> g_new = logreg_gradient(trial, X, labels, C, l2);
    std::vector<double> s(dim), y(dim);
    for (std::size_t t = 0; t < dim; ++t) {
      s[t] = trial[t] - theta[t];
      y[t] = g_new[t] - g[t];
    }
    const double sy = std::inner_product(s.begin(), s.end(), y.begin(), 0.0);
    if (sy > 1e-12) {
      if (s_hist.size() == kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    theta.swap(trial);
    g = std::move(g_new);
    f = f_new;
  }

  BinaryLinearSolution sol;
  sol.bias = theta[n_features];
  theta.pop_back();
  sol.weights = std::move(theta);
  sol.iterations = static_cast<std::size_t>(iter);
  sol.objective = f;
  return sol;
}

namespace detail {

LinearParams train_logreg(std::span<const SparseVector> X, std::span<const std::size_t> y,
                          std::size_t n_classes, std::size_t n_features,
                          const ClassifierSpec& spec, TrainingInfo& info) {
  LinearParams params;
  for (std::size_t k = 0; k < n_classes; ++k) {
    const std::vector<int> labels = one_vs_rest_labels(y, k);
    BinaryLinearSolution sol = solve_logreg_lbfgs(X, labels, n_features, spec.C, spec.l2_penalty,
                                                  spec.tol, spec.max_iter);
    info.iterations = std::max(info.iterations, sol.iterations);
    info.final_objective += sol.objective;
    params.weights.push_back(std::move(sol.weights));
    params.bias.push_back(sol.bias);
  }
  return params;
}

}  // namespace detail

}  // namespace pathtext
