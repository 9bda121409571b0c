#include <algorithm>
#include <cmath>
#include <limits>

#include "pathtext/binary_solvers.hpp"
#include "pathtext/classifiers.hpp"
#include "trainers.hpp"

namespace pathtext {

double kernel_rbf(const SparseVector& x1, const SparseVector& x2, double gamma) {
  return std::exp(-gamma * squared_distance(x1, x2));
}

BinaryKernelSolution solve_kernel_svm_smo(std::span<const double> kernel,
                                          std::span<const int> labels, double C, double tol,
                                          std::size_t max_iter) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kTau = 1e-12;
  const std::size_t l = labels.size();
  auto K = [&](std::size_t i, std::size_t j) { return kernel[i * l + j]; };

  std::vector<double> alpha(l, 0.0);
  std::vector<double> G(l, -1.0);  // gradient of 1/2 a'Qa - e'a
  auto y = [&](std::size_t i) { return static_cast<double>(labels[i]); };
  auto upper = [&](std::size_t i) { return alpha[i] >= C; };
  auto lower = [&](std::size_t i) { return alpha[i] <= 0.0; };

  std::size_t iter = 0;
  while (iter < max_iter) {
    // Maximal violating index i, then second-order choice of j.
    double g_max = -kInf;
    std::size_t i = l;
    for (std::size_t t = 0; t < l; ++t) {
      if (labels[t] == 1) {
        if (!upper(t) && -G[t] >= g_max) {
          g_max = -G[t];
          i = t;
        }
      } else if (!lower(t) && G[t] >= g_max) {
        g_max = G[t];
        i = t;
      }
    }

    double g_max2 = -kInf;
    std::size_t j = l;
    double best_obj = kInf;
    for (std::size_t t = 0; t < l; ++t) {
      if (labels[t] == 1) {
        if (lower(t)) continue;
        const double grad_diff = g_max + G[t];
        g_max2 = std::max(g_max2, G[t]);
        if (grad_diff > 0.0 && i < l) {
          const double quad = K(i, i) + K(t, t) - 2.0 * K(i, t);
          const double obj = -(grad_diff * grad_diff) / (quad > 0.0 ? quad : kTau);
          if (obj <= best_obj) {
            best_obj = obj;
            j = t;
          }
        }
      } else {
        if (upper(t)) continue;
        const double grad_diff = g_max - G[t];
        g_max2 = std::max(g_max2, -G[t]);
        if (grad_diff > 0.0 && i < l) {
          const double quad = K(i, i) + K(t, t) - 2.0 * K(i, t);
          const double obj = -(grad_diff * grad_diff) / (quad > 0.0 ? quad : kTau);
          if (obj <= best_obj) {
            best_obj = obj;
            j = t;
          }
        }
      }
    }
    if (i == l || j == l || g_max + g_max2 < tol) break;
    ++iter;

    const double Qij = y(i) * y(j) * K(i, j);
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (labels[i] != labels[j]) {
      double quad = K(i, i) + K(j, j) + 2.0 * Qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = K(i, i) + K(j, j) - 2.0 * Qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double d_i = alpha[i] - old_i;
    const double d_j = alpha[j] - old_j;
    for (std::size_t t = 0; t < l; ++t) {
      G[t] += y(t) * (y(i) * K(i, t) * d_i + y(j) * K(j, t) * d_j);
    }
  }

  // Offset from free vectors, or the midpoint of the feasible interval.
  double ub = kInf, lb = -kInf, sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < l; ++t) {
    const double yG = y(t) * G[t];
    if (upper(t)) {
      if (labels[t] == -1) ub = std::min(ub, yG); else lb = std::max(lb, yG);
    } else if (lower(t)) {
      if (labels[t] == 1) ub = std::min(ub, yG); else lb = std::max(lb, yG);
    } else {
      ++n_free;
      sum_free += yG;
    }
  }
  BinaryKernelSolution sol;
  if (n_free > 0) {
    sol.rho = sum_free / static_cast<double>(n_free);
  } else if (std::isinf(ub) && std::isinf(lb)) {
    sol.rho = 0.0;
  } else if (std::isinf(ub)) {
    sol.rho = lb;
  } else if (std::isinf(lb)) {
    sol.rho = ub;
  } else {
    sol.rho = (ub + lb) / 2.0;
  }
  double obj = 0.0;
  for (std::size_t t = 0; t < l; ++t) obj += alpha[t] * (G[t] - 1.0);
  sol.objective = 0.5 * obj;
  sol.alpha = std::move(alpha);
  sol.iterations = iter;
  return sol;
}

namespace detail {

KernelParams train_kernel_svm(std::span<const SparseVector> X, std::span<const std::size_t> y,
                              std::size_t n_classes, std::size_t n_features,
                              const ClassifierSpec& spec, TrainingInfo& info) {
  const std::size_t n = X.size();
  KernelParams params;
  params.gamma = spec.gamma > 0.0 ? spec.gamma
                                  : 1.0 / static_cast<double>(std::max<std::size_t>(n_features, 1));

  std::vector<double> kernel(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    kernel[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = kernel_rbf(X[i], X[j], params.gamma);
      kernel[i * n + j] = v;
      kernel[j * n + i] = v;
    }
  }

  // SMO pair updates are cheap; the cap scales with the problem size.
  const std::size_t max_updates = static_cast<std::size_t>(spec.max_iter) * std::max<std::size_t>(n, 1);
  std::vector<std::vector<double>> coef_dense;
  for (std::size_t k = 0; k < n_classes; ++k) {
    const std::vector<int> labels = one_vs_rest_labels(y, k);
    BinaryKernelSolution sol = solve_kernel_svm_smo(kernel, labels, spec.C, spec.tol, max_updates);
    info.iterations = std::max(info.iterations, sol.iterations);
    info.final_objective += sol.objective;
    std::vector<double> coef(n);
    for (std::size_t i = 0; i < n; ++i) coef[i] = labels[i] * sol.alpha[i];
    coef_dense.push_back(std::move(coef));
    params.rho.push_back(sol.rho);
  }

  // Keep only rows that are support vectors for some class.
  for (std::size_t i = 0; i < n; ++i) {
    bool used = false;
    for (const auto& c : coef_dense) used = used || c[i] != 0.0;
    if (!used) continue;
    params.support.push_back(X[i]);
  }
  params.coef.assign(n_classes, {});
  for (std::size_t k = 0; k < n_classes; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      bool used = false;
      for (const auto& c : coef_dense) used = used || c[i] != 0.0;
      if (used) params.coef[k].push_back(coef_dense[k][i]);
    }
  }
  return params;
}

}  // namespace detail

}  // namespace pathtext
