#include "glshap/synthetic.hpp"

#include <cmath>

#include "glshap/errors.hpp"

namespace glshap {
namespace synthetic {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

ProductGame random_game(Rng& rng, int dimension, double lo, double hi) {
  if (dimension < 1) throw invalid_input("game dimension must be >= 1");
  ProductGame game;
  game.factors.resize(dimension);
  for (double& u : game.factors) u = rng.uniform(lo, hi);
  return game;
}

TreeModel random_tree(Rng& rng, int feature_count, int max_depth, int leaf_target) {
  if (feature_count < 1) throw invalid_input("feature_count must be >= 1");
  if (max_depth < 1) throw invalid_input("max_depth must be >= 1");
  if (leaf_target < 1) throw invalid_input("leaf_target must be >= 1");

  TreeModel tree;
  tree.feature_count = feature_count;
  tree.root = 0;
  tree.nodes.push_back(TreeNode{});

  struct Grow {
    int id;
    int depth;
  };
  std::vector<Grow> expandable{{0, 0}};
  int leaves = 1;

  while (leaves < leaf_target && !expandable.empty()) {
    int pick = rng.uniform_int(static_cast<int>(expandable.size()));
    Grow g = expandable[pick];
    expandable[pick] = expandable.back();
    expandable.pop_back();

    int left_id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{});
    tree.nodes.push_back(TreeNode{});

    TreeNode& n = tree.nodes[g.id];
    n.feature = rng.uniform_int(feature_count);
    n.threshold = rng.uniform(-2.0, 2.0);
    n.left_fraction = rng.uniform(0.1, 0.9);
    n.left = left_id;
    n.right = left_id + 1;

    if (g.depth + 1 < max_depth) {
      expandable.push_back({left_id, g.depth + 1});
      expandable.push_back({left_id + 1, g.depth + 1});
    }
    ++leaves;
  }

  for (TreeNode& n : tree.nodes)
    if (n.is_leaf()) n.value = rng.uniform(-10.0, 10.0);
  return tree;
}

TreeEnsemble random_ensemble(Rng& rng, int feature_count, int n_trees, int max_depth,
                             int leaves_per_tree) {
  if (n_trees < 1) throw invalid_input("n_trees must be >= 1");
  TreeEnsemble out;
  out.feature_count = feature_count;
  out.trees.reserve(n_trees);
  for (int t = 0; t < n_trees; ++t)
    out.trees.push_back(random_tree(rng, feature_count, max_depth, leaves_per_tree));
  return out;
}

Matrix random_matrix(Rng& rng, int rows, int cols) {
  Matrix m;
  m.rows = static_cast<std::size_t>(rows);
  m.cols = static_cast<std::size_t>(cols);
  m.data.resize(m.rows * m.cols);
  for (double& v : m.data) v = rng.normal();
  return m;
}

ProductKernelModel random_kernel_model(Rng& rng, int n, int d, KernelFamily family,
                                       double ls_lo, double ls_hi) {
  if (n < 1 || d < 1) throw invalid_input("kernel model needs n >= 1 and d >= 1");
  ProductKernelModel model;
  model.train = random_matrix(rng, n, d);
  model.alpha.resize(n);
  for (double& a : model.alpha) a = rng.normal();
  model.kernel.family = family;
  if (family == KernelFamily::polynomial) {
    model.kernel.degree = 2;
    model.kernel.offset = 1.0;
  } else {
    model.kernel.lengthscales.resize(d);
    for (double& l : model.kernel.lengthscales) l = rng.uniform(ls_lo, ls_hi);
  }
  return model;
}

std::vector<double> random_instance(Rng& rng, int d) {
  std::vector<double> x(d);
  for (double& v : x) v = rng.normal();
  return x;
}

}  // namespace synthetic
}  // namespace glshap
