#include "glshap/tree_model.hpp"

#include <cmath>
#include <string>

#include "glshap/errors.hpp"

namespace glshap {
namespace {

void check_node(const TreeModel& tree, int id) {
  if (id < 0 || static_cast<std::size_t>(id) >= tree.nodes.size())
    throw invalid_input("tree node id " + std::to_string(id) + " out of range");
}

// DFS from the root, verifying each node is visited exactly once.
void walk(const TreeModel& tree, int id, std::vector<char>& seen, int depth) {
  check_node(tree, id);
  if (seen[id]) throw invalid_input("tree node " + std::to_string(id) +
                                    " reached by two paths (not a tree)");
  seen[id] = 1;
  if (static_cast<std::size_t>(depth) > tree.nodes.size())
    throw invalid_input("tree depth exceeds node count (cycle?)");
  const TreeNode& n = tree.nodes[id];
  if (n.is_leaf()) {
    if (!std::isfinite(n.value)) throw invalid_input("leaf value is not finite");
    return;
  }
  if (n.feature >= tree.feature_count)
    throw invalid_input("split feature " + std::to_string(n.feature) +
                        " out of range for feature_count " +
                        std::to_string(tree.feature_count));
  if (!std::isfinite(n.threshold)) throw invalid_input("split threshold is not finite");
  if (!(n.left_fraction > 0.0 && n.left_fraction < 1.0))
    throw invalid_input("left_fraction must lie strictly inside (0,1), got " +
                        std::to_string(n.left_fraction));
  if (n.left < 0 || n.right < 0)
    throw invalid_input("internal node " + std::to_string(id) + " is missing a child");
  walk(tree, n.left, seen, depth + 1);
  walk(tree, n.right, seen, depth + 1);
}

void shape_walk(const TreeModel& tree, int id, std::vector<int>& feature_uses,
                int distinct, int depth, PathShape& shape) {
  const TreeNode& n = tree.nodes[id];
  if (n.is_leaf()) {
    if (distinct > shape.eta) shape.eta = distinct;
    if (depth > shape.depth) shape.depth = depth;
    return;
  }
  int j = n.feature;
  bool fresh = feature_uses[j] == 0;
  feature_uses[j] += 1;
  shape_walk(tree, n.left, feature_uses, distinct + (fresh ? 1 : 0), depth + 1, shape);
  shape_walk(tree, n.right, feature_uses, distinct + (fresh ? 1 : 0), depth + 1, shape);
  feature_uses[j] -= 1;
}

void value_walk(const TreeModel& tree, const std::vector<double>& x,
                const std::vector<char>& subset, int id, double path_fraction,
                double subset_coeff, double& acc) {
  const TreeNode& n = tree.nodes[id];
  if (n.is_leaf()) {
    acc += n.value * path_fraction * subset_coeff;
    return;
  }
  bool left = goes_left(n, x);
  double pl = n.left_fraction;
  double pr = 1.0 - n.left_fraction;
  bool on = subset[n.feature] != 0;
  // In-subset features contribute their path coefficient c_e (1/p on the
  // followed side, 0 on the other); out-of-subset features only their mass.
  double cl = on ? (left ? 1.0 / pl : 0.0) : 1.0;
  double cr = on ? (left ? 0.0 : 1.0 / pr) : 1.0;
  value_walk(tree, x, subset, n.left, path_fraction * pl, subset_coeff * cl, acc);
  value_walk(tree, x, subset, n.right, path_fraction * pr, subset_coeff * cr, acc);
}

}  // namespace

void validate_tree(const TreeModel& tree) {
  if (tree.nodes.empty()) throw invalid_input("tree has no nodes");
  if (tree.feature_count < 1) throw invalid_input("feature_count must be >= 1");
  std::vector<char> seen(tree.nodes.size(), 0);
  walk(tree, tree.root, seen, 0);
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw invalid_input("tree node " + std::to_string(i) + " unreachable from root");
}

void validate_ensemble(const TreeEnsemble& ensemble) {
  if (ensemble.trees.empty()) throw invalid_input("ensemble has no trees");
  if (ensemble.feature_count < 1) throw invalid_input("feature_count must be >= 1");
  for (const TreeModel& t : ensemble.trees) {
    if (t.feature_count != ensemble.feature_count)
      throw dimension_mismatch("tree feature_count disagrees with ensemble");
    validate_tree(t);
  }
}

bool goes_left(const TreeNode& node, const std::vector<double>& x) {
  double v = x.at(node.feature);
  if (std::isnan(v)) throw invalid_input("instance has NaN for split feature " +
                                         std::to_string(node.feature));
  return v <= node.threshold;
}

double edge_factor(const TreeModel& tree, int parent, bool left_side,
                   const std::vector<double>& x) {
  check_node(tree, parent);
  const TreeNode& n = tree.nodes[parent];
  if (n.is_leaf()) throw invalid_input("edge_factor on a leaf node");
  bool followed = goes_left(n, x) == left_side;
  if (!followed) return 0.0;
  double p = left_side ? n.left_fraction : 1.0 - n.left_fraction;
  return 1.0 / p;
}

double tree_value(const TreeModel& tree, const std::vector<double>& x,
                  const std::vector<char>& subset) {
  if (x.size() != static_cast<std::size_t>(tree.feature_count))
    throw dimension_mismatch("instance length does not match feature_count");
  if (subset.size() != x.size())
    throw dimension_mismatch("subset mask length does not match feature_count");
  for (double v : x)
    if (std::isnan(v)) throw invalid_input("instance contains NaN");
  double acc = 0.0;
  value_walk(tree, x, subset, tree.root, 1.0, 1.0, acc);
  return acc;
}

PathShape effective_path_dimension(const TreeModel& tree) {
  PathShape shape;
  std::vector<int> uses(tree.feature_count, 0);
  shape_walk(tree, tree.root, uses, 0, 0, shape);
  return shape;
}

PathShape effective_path_dimension(const TreeEnsemble& ensemble) {
  PathShape shape;
  for (const TreeModel& t : ensemble.trees) {
    PathShape s = effective_path_dimension(t);
    if (s.eta > shape.eta) shape.eta = s.eta;
    if (s.depth > shape.depth) shape.depth = s.depth;
  }
  return shape;
}

std::size_t leaf_count(const TreeModel& tree) {
  std::size_t count = 0;
  for (const TreeNode& n : tree.nodes)
    if (n.is_leaf()) ++count;
  return count;
}

}  // namespace glshap
