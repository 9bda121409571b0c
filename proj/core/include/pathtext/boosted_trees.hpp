#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathtext/sparse.hpp"

namespace pathtext {

/// Node of a regression tree. Leaves have feature == kLeaf.
struct TreeNode {
  static constexpr std::int32_t kLeaf = -1;

  std::int32_t feature = kLeaf;
  /// Present values strictly below the threshold go left.
  double threshold = 0.0;
  /// Direction for rows where the feature is absent (zero).
  bool default_left = false;
  std::int32_t left = -1;
  std::int32_t right = -1;
  /// Leaf output, already scaled by the learning rate.
  double value = 0.0;

  bool is_leaf() const { return feature == kLeaf; }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Nodes are stored in preorder with the root at index 0.
class RegressionTree {
 public:
  RegressionTree() = default;
  explicit RegressionTree(std::vector<TreeNode> nodes);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t depth() const;

  /// Index of the leaf reached by `x`.
  std::size_t leaf_index(const SparseVector& x) const;
  double predict(const SparseVector& x) const { return nodes_[leaf_index(x)].value; }

  /// One line per node in preorder: "S feature threshold default_left" or
  /// "L value".
  std::string serialize() const;
  /// Parses `count` preorder lines starting at lines[pos]; advances pos.
  static RegressionTree deserialize(std::span<const std::string> lines, std::size_t& pos);

  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

/// Softmax boosting ensemble: rounds[r][k] is the tree for class k in round r.
struct TreeEnsemble {
  std::size_t n_classes = 0;
  std::vector<std::vector<RegressionTree>> rounds;

  /// Summed tree outputs per class.
  std::vector<double> raw_scores(const SparseVector& x) const;

  friend bool operator==(const TreeEnsemble&, const TreeEnsemble&) = default;
};

/// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> scores);

/// Sum over rows of -log softmax(scores_i)[y_i]. `scores` is row-major
/// n x n_classes.
double softmax_loss(std::span<const double> scores, std::span<const std::size_t> y,
                    std::size_t n_classes);

/// d softmax_loss / d scores: p_ik - [y_i == k].
std::vector<double> softmax_gradient(std::span<const double> scores,
                                     std::span<const std::size_t> y, std::size_t n_classes);

/// Diagonal of the per-row Hessian: p_ik (1 - p_ik).
std::vector<double> softmax_hessian_diagonal(std::span<const double> scores,
                                             std::size_t n_classes);

struct TreeParams {
  int max_depth = 6;
  double reg_lambda = 1.0;
  double min_child_weight = 1.0;
  double learning_rate = 0.3;
  /// Minimum loss reduction for a split.
  double min_split_gain = 1e-6;
};

/// Column-major copy of a sparse design matrix: per feature, (row, value)
/// pairs sorted by value and then row.
class ColumnIndex {
 public:
  struct Entry {
    std::uint32_t row;
    double value;
  };

  ColumnIndex(std::span<const SparseVector> rows, std::size_t n_features);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_features() const { return columns_.size(); }
  std::span<const Entry> column(std::size_t f) const { return columns_[f]; }

 private:
  std::size_t n_rows_;
  std::vector<std::vector<Entry>> columns_;
};

/// Grows one tree by exact greedy search with second-order gain
/// 1/2 [GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)], learning a default direction
/// for absent features. Leaf values are -G/(H+l) * learning_rate.
/// On return, leaf_of_row[i] is the leaf reached by training row i.
RegressionTree grow_tree(const ColumnIndex& columns, std::span<const double> grad,
                         std::span<const double> hess, const TreeParams& params,
                         std::vector<std::size_t>& leaf_of_row);

/// Regularized second-order objective of one tree's leaf weights for class
/// `k`: sum_i loss(scores_i + w_leaf(i) e_k) + lambda/2 ||w||^2.
double leaf_weight_objective(std::span<const double> scores, std::span<const std::size_t> y,
                             std::size_t n_classes, std::size_t k,
                             std::span<const std::size_t> leaf_of_row,
                             std::span<const double> leaf_weights, double reg_lambda);

/// Analytic gradient of leaf_weight_objective with respect to the leaf weights.
std::vector<double> leaf_weight_gradient(std::span<const double> scores,
                                         std::span<const std::size_t> y, std::size_t n_classes,
                                         std::size_t k, std::span<const std::size_t> leaf_of_row,
                                         std::span<const double> leaf_weights, double reg_lambda);

}  // namespace pathtext
