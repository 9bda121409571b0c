#include "pathtext/boosted_trees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pathtext/classifiers.hpp"
#include "pathtext/error.hpp"
#include "pathtext/text_io.hpp"
#include "trainers.hpp"

namespace pathtext {

RegressionTree::RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) nodes_.push_back(TreeNode{});
}

std::size_t RegressionTree::depth() const {
  // Iterative walk carrying node depth.
  std::size_t best = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [node, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    const TreeNode& n = nodes_[node];
    if (!n.is_leaf()) {
      stack.push_back({static_cast<std::size_t>(n.left), d + 1});
      stack.push_back({static_cast<std::size_t>(n.right), d + 1});
    }
  }
  return best;
}

std::size_t RegressionTree::leaf_index(const SparseVector& x) const {
  std::size_t node = 0;
  while (!nodes_[node].is_leaf()) {
    const TreeNode& n = nodes_[node];
    const double v = x.at(static_cast<std::uint32_t>(n.feature));
    bool go_left;
    if (v == 0.0) {
      go_left = n.default_left;
    } else {
      go_left = v < n.threshold;
    }
    node = static_cast<std::size_t>(go_left ? n.left : n.right);
  }
  return node;
}

std::string RegressionTree::serialize() const {
  std::string out;
  for (const TreeNode& n : nodes_) {
    if (n.is_leaf()) {
      out += "L " + format_double_exact(n.value) + "\n";
    } else {
      out += "S " + std::to_string(n.feature) + " " + format_double_exact(n.threshold) + " " +
             (n.default_left ? "1" : "0") + "\n";
    }
  }
  return out;
}

namespace {

std::int32_t parse_preorder(std::span<const std::string> lines, std::size_t& pos,
                            std::vector<TreeNode>& nodes) {
  if (pos >= lines.size()) throw FormatError("tree: unexpected end of input");
  auto f = split_whitespace(lines[pos++]);
  const auto index = static_cast<std::int32_t>(nodes.size());
  nodes.emplace_back();
  if (f.size() == 2 && f[0] == "L") {
    nodes[static_cast<std::size_t>(index)].value = parse_double(f[1]);
    return index;
  }
  if (f.size() != 4 || f[0] != "S") throw FormatError("tree: malformed node line");
  TreeNode n;
  n.feature = static_cast<std::int32_t>(parse_size(f[1]));
  n.threshold = parse_double(f[2]);
  n.default_left = f[3] == "1";
  n.left = parse_preorder(lines, pos, nodes);
  n.right = parse_preorder(lines, pos, nodes);
  nodes[static_cast<std::size_t>(index)] = n;
  return index;
}

}  // namespace

RegressionTree RegressionTree::deserialize(std::span<const std::string> lines, std::size_t& pos) {
  std::vector<TreeNode> nodes;
  parse_preorder(lines, pos, nodes);
  return RegressionTree(std::move(nodes));
}

std::vector<double> TreeEnsemble::raw_scores(const SparseVector& x) const {
  std::vector<double> scores(n_classes, 0.0);
  for (const auto& round : rounds) {
    for (std::size_t k = 0; k < round.size(); ++k) scores[k] += round[k].predict(x);
  }
  return scores;
}

std::vector<double> softmax(std::span<const double> scores) {
  std::vector<double> p(scores.begin(), scores.end());
  if (p.empty()) return p;
  const double m = *std::max_element(p.begin(), p.end());
  double z = 0.0;
  for (double& v : p) {
    v = std::exp(v - m);
    z += v;
  }
  for (double& v : p) v /= z;
  return p;
}

namespace {

double row_log_sum_exp(std::span<const double> row) {
  const double m = *std::max_element(row.begin(), row.end());
  double z = 0.0;
  for (double v : row) z += std::exp(v - m);
  return m + std::log(z);
}

}  // namespace

double softmax_loss(std::span<const double> scores, std::span<const std::size_t> y,
                    std::size_t n_classes) {
  double loss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    auto row = scores.subspan(i * n_classes, n_classes);
    loss += row_log_sum_exp(row) - row[y[i]];
  }
  return loss;
}

std::vector<double> softmax_gradient(std::span<const double> scores,
                                     std::span<const std::size_t> y, std::size_t n_classes) {
  std::vector<double> grad(scores.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    auto p = softmax(scores.subspan(i * n_classes, n_classes));
    for (std::size_t k = 0; k < n_classes; ++k) {
      grad[i * n_classes + k] = p[k] - (y[i] == k ? 1.0 : 0.0);
    }
  }
  return grad;
}

std::vector<double> softmax_hessian_diagonal(std::span<const double> scores,
                                             std::size_t n_classes) {
  std::vector<double> hess(scores.size());
  const std::size_t n = n_classes == 0 ? 0 : scores.size() / n_classes;
  for (std::size_t i = 0; i < n; ++i) {
    auto p = softmax(scores.subspan(i * n_classes, n_classes));
    for (std::size_t k = 0; k < n_classes; ++k) hess[i * n_classes + k] = p[k] * (1.0 - p[k]);
  }
  return hess;
}

ColumnIndex::ColumnIndex(std::span<const SparseVector> rows, std::size_t n_features)
    : n_rows_(rows.size()), columns_(n_features) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const SparseEntry& e : rows[i].entries()) {
      if (e.index >= n_features) {
        throw DimensionError("feature index " + std::to_string(e.index) +
                             " exceeds dimension " + std::to_string(n_features));
      }
      columns_[e.index].push_back({static_cast<std::uint32_t>(i), e.weight});
    }
  }
  for (auto& col : columns_) {
    std::stable_sort(col.begin(), col.end(),
                     [](const Entry& a, const Entry& b) { return a.value < b.value; });
  }
}

namespace {

struct BuildNode {
  double G = 0.0;
  double H = 0.0;
  std::size_t count = 0;
  std::int32_t feature = TreeNode::kLeaf;
  double threshold = 0.0;
  bool default_left = false;
  std::int32_t left = -1;
  std::int32_t right = -1;
};

struct Side {
  double G = 0.0;
  double H = 0.0;
  std::size_t count = 0;
  double last = 0.0;
};

struct Candidate {
  double gain = 0.0;
  std::int32_t feature = -1;
  double threshold = 0.0;
  bool default_left = false;
  Side left;
  Side right;
};

double score(double G, double H, double lambda) { return G * G / (H + lambda); }

// Threshold strictly above `lo` and at most `hi`, so lo goes left and hi right.
double split_point(double lo, double hi) {
  double t = lo + (hi - lo) / 2.0;
  return t > lo ? t : hi;
}

}  // namespace

RegressionTree grow_tree(const ColumnIndex& columns, std::span<const double> grad,
                         std::span<const double> hess, const TreeParams& params,
                         std::vector<std::size_t>& leaf_of_row) {
  const std::size_t n = columns.n_rows();
  const double lambda = params.reg_lambda;

  std::vector<BuildNode> nodes(1);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[0].G += grad[i];
    nodes[0].H += hess[i];
  }
  nodes[0].count = n;

  std::vector<std::int32_t> node_of_row(n, 0);
  std::vector<std::int32_t> frontier{0};

  for (int depth = 0; depth < params.max_depth && !frontier.empty(); ++depth) {
    std::vector<std::int32_t> slot_of_node(nodes.size(), -1);
    for (std::size_t s = 0; s < frontier.size(); ++s) {
      slot_of_node[static_cast<std::size_t>(frontier[s])] = static_cast<std::int32_t>(s);
    }
    std::vector<Candidate> best(frontier.size());
    std::vector<Side> acc(frontier.size());

    auto consider = [&](std::size_t s, const Side& left, const Side& right, std::int32_t feature,
                        double threshold, bool default_left) {
      if (left.H < params.min_child_weight || right.H < params.min_child_weight) return;
      if (left.count == 0 || right.count == 0) return;
      const BuildNode& parent = nodes[static_cast<std::size_t>(frontier[s])];
      const double gain = 0.5 * (score(left.G, left.H, lambda) + score(right.G, right.H, lambda) -
                                 score(parent.G, parent.H, lambda));
      if (gain > params.min_split_gain && gain > best[s].gain) {
        best[s] = Candidate{gain, feature, threshold, default_left, left, right};
      }
    };
    auto complement = [&](std::size_t s, const Side& part) {
      const BuildNode& parent = nodes[static_cast<std::size_t>(frontier[s])];
      return Side{parent.G - part.G, parent.H - part.H, parent.count - part.count, 0.0};
    };

    for (std::size_t f = 0; f < columns.n_features(); ++f) {
      auto col = columns.column(f);
      if (col.empty()) continue;
      const auto feature = static_cast<std::int32_t>(f);

      // Ascending scan: absent rows default right.
      std::fill(acc.begin(), acc.end(), Side{});
      for (const auto& e : col) {
        const std::int32_t s = slot_of_node[static_cast<std::size_t>(node_of_row[e.row])];
        if (s < 0) continue;
        Side& a = acc[static_cast<std::size_t>(s)];
        if (a.count > 0 && e.value != a.last) {
          consider(static_cast<std::size_t>(s), a, complement(static_cast<std::size_t>(s), a),
                   feature, split_point(a.last, e.value), false);
        }
        a.G += grad[e.row];
        a.H += hess[e.row];
        ++a.count;
        a.last = e.value;
      }

      // Descending scan: absent rows default left.
      std::fill(acc.begin(), acc.end(), Side{});
      for (auto it = col.rbegin(); it != col.rend(); ++it) {
        const auto& e = *it;
        const std::int32_t s = slot_of_node[static_cast<std::size_t>(node_of_row[e.row])];
        if (s < 0) continue;
        Side& a = acc[static_cast<std::size_t>(s)];
        if (a.count > 0 && e.value != a.last) {
          consider(static_cast<std::size_t>(s), complement(static_cast<std::size_t>(s), a), a,
                   feature, split_point(e.value, a.last), true);
        }
        a.G += grad[e.row];
        a.H += hess[e.row];
        ++a.count;
        a.last = e.value;
      }
      // Present versus absent: every present row right, threshold at the
      // smallest present value.
      for (std::size_t s = 0; s < frontier.size(); ++s) {
        const Side& a = acc[s];
        if (a.count > 0) consider(s, complement(s, a), a, feature, a.last, true);
      }
    }

    std::vector<std::int32_t> next_frontier;
    std::vector<bool> split_here(nodes.size(), false);
    for (std::size_t s = 0; s < frontier.size(); ++s) {
      const Candidate& c = best[s];
      if (c.feature < 0) continue;
      const auto id = static_cast<std::size_t>(frontier[s]);
      const auto left = static_cast<std::int32_t>(nodes.size());
      nodes.push_back(BuildNode{c.left.G, c.left.H, c.left.count});
      nodes.push_back(BuildNode{c.right.G, c.right.H, c.right.count});
      BuildNode& parent = nodes[id];
      parent.feature = c.feature;
      parent.threshold = c.threshold;
      parent.default_left = c.default_left;
      parent.left = left;
      parent.right = left + 1;
      split_here[id] = true;
      next_frontier.push_back(left);
      next_frontier.push_back(left + 1);
    }
    if (next_frontier.empty()) break;

    // Route rows: absent features follow the default, present ones compare.
    std::vector<std::int32_t> routed(node_of_row);
    std::vector<std::int32_t> split_features;
    for (std::size_t i = 0; i < n; ++i) {
      const auto id = static_cast<std::size_t>(node_of_row[i]);
      if (split_here[id]) routed[i] = nodes[id].default_left ? nodes[id].left : nodes[id].right;
    }
    for (std::int32_t id : frontier) {
      if (split_here[static_cast<std::size_t>(id)]) {
        split_features.push_back(nodes[static_cast<std::size_t>(id)].feature);
      }
    }
    std::sort(split_features.begin(), split_features.end());
    split_features.erase(std::unique(split_features.begin(), split_features.end()),
                         split_features.end());
    for (std::int32_t f : split_features) {
      for (const auto& e : columns.column(static_cast<std::size_t>(f))) {
        const auto id = static_cast<std::size_t>(node_of_row[e.row]);
        if (!split_here[id] || nodes[id].feature != f) continue;
        routed[e.row] = e.value < nodes[id].threshold ? nodes[id].left : nodes[id].right;
      }
    }
    node_of_row = std::move(routed);
    frontier = std::move(next_frontier);
  }

  // Renumber in preorder.
  std::vector<TreeNode> out;
  std::vector<std::int32_t> new_index(nodes.size(), -1);
  auto emit = [&](auto&& self, std::int32_t id) -> std::int32_t {
    const BuildNode& b = nodes[static_cast<std::size_t>(id)];
    const auto index = static_cast<std::int32_t>(out.size());
    new_index[static_cast<std::size_t>(id)] = index;
    out.emplace_back();
    TreeNode t;
    if (b.feature == TreeNode::kLeaf) {
      t.value = -b.G / (b.H + lambda) * params.learning_rate;
    } else {
      t.feature = b.feature;
      t.threshold = b.threshold;
      t.default_left = b.default_left;
      t.left = self(self, b.left);
      t.right = self(self, b.right);
    }
    out[static_cast<std::size_t>(index)] = t;
    return index;
  };
  emit(emit, 0);

  leaf_of_row.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    leaf_of_row[i] = static_cast<std::size_t>(new_index[static_cast<std::size_t>(node_of_row[i])]);
  }
  return RegressionTree(std::move(out));
}

namespace {

std::vector<double> shifted_row(std::span<const double> scores, std::size_t i,
                                std::size_t n_classes, std::size_t k, double shift) {
  std::vector<double> row(scores.begin() + static_cast<std::ptrdiff_t>(i * n_classes),
                          scores.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_classes));
  row[k] += shift;
  return row;
}

}  // namespace

double leaf_weight_objective(std::span<const double> scores, std::span<const std::size_t> y,
                             std::size_t n_classes, std::size_t k,
                             std::span<const std::size_t> leaf_of_row,
                             std::span<const double> leaf_weights, double reg_lambda) {
  double obj = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    auto row = shifted_row(scores, i, n_classes, k, leaf_weights[leaf_of_row[i]]);
    obj += row_log_sum_exp(row) - row[y[i]];
  }
  for (double w : leaf_weights) obj += 0.5 * reg_lambda * w * w;
  return obj;
}

std::vector<double> leaf_weight_gradient(std::span<const double> scores,
                                         std::span<const std::size_t> y, std::size_t n_classes,
                                         std::size_t k, std::span<const std::size_t> leaf_of_row,
                                         std::span<const double> leaf_weights, double reg_lambda) {
  std::vector<double> grad(leaf_weights.size());
  for (std::size_t l = 0; l < leaf_weights.size(); ++l) grad[l] = reg_lambda * leaf_weights[l];
  for (std::size_t i = 0; i < y.size(); ++i) {
    const std::size_t leaf = leaf_of_row[i];
    auto p = softmax(shifted_row(scores, i, n_classes, k, leaf_weights[leaf]));
    grad[leaf] += p[k] - (y[i] == k ? 1.0 : 0.0);
  }
  return grad;
}

namespace detail {

TreeEnsemble train_boosted_trees(std::span<const SparseVector> X, std::span<const std::size_t> y,
                                 std::size_t n_classes, std::size_t n_features,
                                 const ClassifierSpec& spec, TrainingInfo& info) {
  const std::size_t n = X.size();
  const ColumnIndex columns(X, n_features);
  const TreeParams params{spec.max_depth, spec.reg_lambda, spec.min_child_weight,
                          spec.learning_rate};

  TreeEnsemble ensemble;
  ensemble.n_classes = n_classes;
  std::vector<double> scores(n * n_classes, 0.0);
  std::vector<double> g(n), h(n);
  std::vector<std::size_t> leaf_of_row;

  double loss = softmax_loss(scores, y, n_classes);
  int stalled = 0;
  for (int round = 0; round < spec.n_rounds; ++round) {
    const std::vector<double> grad = softmax_gradient(scores, y, n_classes);
    const std::vector<double> hess = softmax_hessian_diagonal(scores, n_classes);

    std::vector<RegressionTree> trees;
    trees.reserve(n_classes);
    std::vector<double> next = scores;
    for (std::size_t k = 0; k < n_classes; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        g[i] = grad[i * n_classes + k];
        h[i] = std::max(hess[i * n_classes + k], 1e-16);
      }
      RegressionTree tree = grow_tree(columns, g, h, params, leaf_of_row);
      for (std::size_t i = 0; i < n; ++i) {
        next[i * n_classes + k] += tree.nodes()[leaf_of_row[i]].value;
      }
      trees.push_back(std::move(tree));
    }
    scores = std::move(next);
    ensemble.rounds.push_back(std::move(trees));

    const double new_loss = softmax_loss(scores, y, n_classes);
    info.loss_history.push_back(new_loss);
    const double improvement = loss - new_loss;
    loss = new_loss;
    if (spec.early_stopping_rounds > 0) {
      stalled = improvement < spec.tol ? stalled + 1 : 0;
      if (stalled >= spec.early_stopping_rounds) break;
    }
  }
  info.iterations = ensemble.rounds.size();
  info.final_objective = loss;
  return ensemble;
}

}  // namespace detail

}  // namespace pathtext
