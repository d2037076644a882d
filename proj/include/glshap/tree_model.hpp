#ifndef GLSHAP_TREE_MODEL_HPP
#define GLSHAP_TREE_MODEL_HPP

#include <cstddef>
#include <vector>

namespace glshap {

// One node of a binary tree. feature < 0 marks a leaf (value used);
// otherwise feature/threshold/left/right/left_fraction describe the split.
// left_fraction is the training mass that went left at this split.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double left_fraction = 0.5;
  double value = 0.0;
  bool is_leaf() const { return feature < 0; }
};

struct TreeModel {
  std::vector<TreeNode> nodes;
  int root = 0;
  int feature_count = 0;
};

struct TreeEnsemble {
  int feature_count = 0;
  std::vector<TreeModel> trees;
};

// eta: most distinct split features on any root-to-leaf path (the game
// dimension that matters for exactness); depth: longest path in edges.
struct PathShape {
  int eta = 0;
  int depth = 0;
};

// Structural checks: a single root, every node reached exactly once, both
// children present on internal nodes, left_fraction inside (0,1), finite
// thresholds and leaf values, feature ids inside [0, feature_count).
void validate_tree(const TreeModel& tree);
void validate_ensemble(const TreeEnsemble& ensemble);

// Split direction: x[feature] <= threshold goes left (ties go left).
bool goes_left(const TreeNode& node, const std::vector<double>& x);

// 1/p_e if x follows the edge from `parent` to the given side, else 0.
double edge_factor(const TreeModel& tree, int parent, bool left_side,
                   const std::vector<double>& x);

// v_x(S) = sum_leaves value * (prod of edge fractions) * (prod over features
// in S of that leaf's path coefficients). Literal leaf enumeration; this is
// the reference the fast paths are checked against.
double tree_value(const TreeModel& tree, const std::vector<double>& x,
                  const std::vector<char>& subset);

PathShape effective_path_dimension(const TreeModel& tree);
PathShape effective_path_dimension(const TreeEnsemble& ensemble);

std::size_t leaf_count(const TreeModel& tree);

}  // namespace glshap

#endif
