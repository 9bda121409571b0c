#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pathtext/sparse.hpp"

namespace pathtext {

/// Weight vector plus bias for a binary linear scorer. Labels are +1 / -1.
/// The bias is learned as the weight of a constant feature with value 1, so
/// it is regularized like every other weight.
struct BinaryLinearSolution {
  std::vector<double> weights;
  double bias = 0.0;
  std::size_t iterations = 0;
  double objective = 0.0;
};

/// L1-loss (hinge) linear SVM by dual coordinate descent:
///   min_a 1/2 a'Qa - e'a,  0 <= a_i <= C,  Q_ij = y_i y_j (x_i'x_j + 1).
/// Stops when the projected-gradient spread falls below `tol` or after
/// `max_iter` passes. `shrinking` enables active-set pruning. The visiting
/// order is a seeded permutation per pass. `objective` is the primal value
/// 1/2 ||w||^2 + C sum hinge.
BinaryLinearSolution solve_linear_svm_dual(std::span<const SparseVector> X,
                                           std::span<const int> labels, std::size_t n_features,
                                           double C, double tol, int max_iter, bool shrinking,
                                           std::uint64_t seed);

/// Regularized logistic loss over the augmented parameter vector
/// theta = (w, b) of length n_features + 1:
///   f(theta) = [l2] 1/2 ||theta||^2 + C sum_i log(1 + exp(-y_i (w'x_i + b))).
double logreg_objective(std::span<const double> theta, std::span<const SparseVector> X,
                        std::span<const int> labels, double C, bool l2);

/// Analytic gradient of logreg_objective.
std::vector<double> logreg_gradient(std::span<const double> theta,
                                    std::span<const SparseVector> X,
                                    std::span<const int> labels, double C, bool l2);

/// Minimizes logreg_objective with L-BFGS (memory 10, Armijo backtracking).
/// Stops when ||grad|| <= tol * max(1, ||grad_0||) or after max_iter steps.
BinaryLinearSolution solve_logreg_lbfgs(std::span<const SparseVector> X,
                                        std::span<const int> labels, std::size_t n_features,
                                        double C, bool l2, double tol, int max_iter);

struct BinaryKernelSolution {
  std::vector<double> alpha;
  double rho = 0.0;
  std::size_t iterations = 0;
  double objective = 0.0;
};

/// C-SVC dual by SMO with second-order working-set selection over a
/// precomputed row-major n x n kernel matrix. Decision value for a point z is
/// sum_i alpha_i y_i K(x_i, z) - rho.
BinaryKernelSolution solve_kernel_svm_smo(std::span<const double> kernel,
                                          std::span<const int> labels, double C, double tol,
                                          std::size_t max_iter);

}  // namespace pathtext
