#pragma once

#include <span>

#include "pathtext/classifiers.hpp"

namespace pathtext::detail {

LinearParams train_linear_svm(std::span<const SparseVector> X, std::span<const std::size_t> y,
                              std::size_t n_classes, std::size_t n_features,
                              const ClassifierSpec& spec, TrainingInfo& info);

LinearParams train_logreg(std::span<const SparseVector> X, std::span<const std::size_t> y,
                          std::size_t n_classes, std::size_t n_features,
                          const ClassifierSpec& spec, TrainingInfo& info);

KernelParams train_kernel_svm(std::span<const SparseVector> X, std::span<const std::size_t> y,
                              std::size_t n_classes, std::size_t n_features,
                              const ClassifierSpec& spec, TrainingInfo& info);

TreeEnsemble train_boosted_trees(std::span<const SparseVector> X, std::span<const std::size_t> y,
                                 std::size_t n_classes, std::size_t n_features,
                                 const ClassifierSpec& spec, TrainingInfo& info);

/// +1 for rows of class k, -1 otherwise.
std::vector<int> one_vs_rest_labels(std::span<const std::size_t> y, std::size_t k);

}  // namespace pathtext::detail
