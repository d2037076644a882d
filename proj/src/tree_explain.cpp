#include "glshap/tree_explain.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "glshap/errors.hpp"
#include "glshap/kernels.hpp"
#include "glshap/parallel.hpp"

namespace glshap {
namespace {

void validate_instance(const TreeModel& tree, const std::vector<double>& x) {
  if (x.size() != static_cast<std::size_t>(tree.feature_count))
    throw dimension_mismatch("instance has " + std::to_string(x.size()) +
                             " features, tree expects " +
                             std::to_string(tree.feature_count));
  for (double v : x)
    if (std::isnan(v)) throw invalid_input("instance contains NaN");
}

void validate_rule(const QuadratureRule& rule) {
  if (rule.order < 1 || rule.nodes.size() != static_cast<std::size_t>(rule.order))
    throw budget_error("quadrature rule is empty or inconsistent");
}

// s_r(q) = (q-1) / ((1-tau_r) + tau_r q)
inline double loo_transform(double q, double tau) {
  return (q - 1.0) / ((1.0 - tau) + tau * q);
}

// Depth-first single-pass evaluator. Carries, along the current path,
//   q[j]   the accumulated path coefficient of feature j (1 off-path), and
//   B[r]   prod(edge fractions) * prod_j ((1-tau_r) + tau_r q[j]),
// updating B by one multiply per edge and restoring saved copies on
// backtrack so the state after a subtree is bit-identical to the state
// before it. Leaves return H[r] = value * B[r]; an edge with feature j
// adds sum_r w_r H_below[r] (s_r(q_new) - s_r(q_old)) to phi[j].
//
// With edge multipliers in {0} u (1, inf) and tau in (0,1), the factor
// (1-tau_r) + tau_r q stays >= 1-tau_r > 0, so no update can hit a zero
// or divide by zero.
class PathEngine {
 public:
  PathEngine(const TreeModel& tree, const std::vector<double>& x,
             const QuadratureRule& rule)
      : tree_(&tree),
        x_(&x),
        tau_(rule.nodes.data()),
        w_(rule.weights.data()),
        m_(static_cast<std::size_t>(rule.order)),
        q_(tree.feature_count, 1.0),
        b_(m_, 1.0),
        // all per-depth scratch up front, so recursion never moves a
        // buffer a parent frame still points into
        levels_(static_cast<std::size_t>(effective_path_dimension(tree).depth) + 1) {
    for (Level& lvl : levels_) {
      lvl.saved_b.resize(m_);
      lvl.h_total.resize(m_);
    }
  }

  void run(std::vector<double>& phi) {
    phi_ = &phi;
    h_walk(tree_->root, 0);
  }

  const std::vector<double>& path_coeffs() const { return q_; }
  const std::vector<double>& node_products() const { return b_; }

 private:
  struct Level {
    std::vector<double> saved_b;
    std::vector<double> h_total;
  };

  const double* h_walk(int id, std::size_t depth) {
    const TreeNode& n = tree_->nodes[id];
    Level& lvl = levels_[depth];
    if (n.is_leaf()) {
      for (std::size_t r = 0; r < m_; ++r) lvl.h_total[r] = n.value * b_[r];
      return lvl.h_total.data();
    }
    std::fill(lvl.h_total.begin(), lvl.h_total.end(), 0.0);
    const int j = n.feature;
    const bool went_left = goes_left(n, *x_);
    for (int side = 0; side < 2; ++side) {
      const bool is_left = side == 0;
      const int child = is_left ? n.left : n.right;
      const double p = is_left ? n.left_fraction : 1.0 - n.left_fraction;
      const double c = (is_left == went_left) ? 1.0 / p : 0.0;
      const double qold = q_[j];
      const double qnew = qold * c;
      std::copy(b_.begin(), b_.end(), lvl.saved_b.begin());
      kernels::ops().path_rescale(b_.data(), tau_, m_, p, qnew, qold);
      q_[j] = qnew;
      const double* h_child = h_walk(child, depth + 1);
      (*phi_)[j] +=
          kernels::ops().edge_gather(w_, tau_, h_child, lvl.h_total.data(), m_, qnew, qold);
      q_[j] = qold;
      std::copy(lvl.saved_b.begin(), lvl.saved_b.end(), b_.begin());
    }
    return lvl.h_total.data();
  }

  const TreeModel* tree_;
  const std::vector<double>* x_;
  const double* tau_;
  const double* w_;
  std::size_t m_;
  std::vector<double> q_;
  std::vector<double> b_;
  std::vector<Level> levels_;
  std::vector<double>* phi_ = nullptr;
};

// Per-leaf evaluator used as a cross-check: walks to each leaf, then
// recombines that leaf's factors from scratch.
class LeafEnumerator {
 public:
  LeafEnumerator(const TreeModel& tree, const std::vector<double>& x,
                 const QuadratureRule& rule)
      : tree_(&tree),
        x_(&x),
        rule_(&rule),
        q_(tree.feature_count, 1.0),
        uses_(tree.feature_count, 0),
        a_(static_cast<std::size_t>(rule.order)) {}

  void run(std::vector<double>& phi) {
    phi_ = &phi;
    walk(tree_->root, 1.0);
  }

 private:
  void walk(int id, double path_fraction) {
    const TreeNode& n = tree_->nodes[id];
    if (n.is_leaf()) {
      settle(n.value * path_fraction);
      return;
    }
    const int j = n.feature;
    const bool went_left = goes_left(n, *x_);
    for (int side = 0; side < 2; ++side) {
      const bool is_left = side == 0;
      const double p = is_left ? n.left_fraction : 1.0 - n.left_fraction;
      const double c = (is_left == went_left) ? 1.0 / p : 0.0;
      const double qold = q_[j];
      q_[j] = qold * c;
      if (uses_[j]++ == 0) path_features_.push_back(j);
      walk(is_left ? n.left : n.right, path_fraction * p);
      if (--uses_[j] == 0) path_features_.pop_back();
      q_[j] = qold;
    }
  }

  // Leaf contribution: A_r = weight * prod_j a_r(q_j) over the path's
  // distinct features, then phi_j += sum_r w_r A_r s_r(q_j).
  void settle(double weight) {
    const std::size_t m = a_.size();
    for (std::size_t r = 0; r < m; ++r) {
      double tau = rule_->nodes[r];
      double prod = weight;
      for (int j : path_features_) prod *= (1.0 - tau) + tau * q_[j];
      a_[r] = prod;
    }
    for (int j : path_features_) {
      double acc = 0.0;
      for (std::size_t r = 0; r < m; ++r)
        acc += rule_->weights[r] * a_[r] * loo_transform(q_[j], rule_->nodes[r]);
      (*phi_)[j] += acc;
    }
  }

  const TreeModel* tree_;
  const std::vector<double>* x_;
  const QuadratureRule* rule_;
  std::vector<double> q_;
  std::vector<int> uses_;
  std::vector<int> path_features_;
  std::vector<double> a_;
  std::vector<double>* phi_ = nullptr;
};

}  // namespace

int tree_rule_order(const TreeModel& tree, const BudgetPolicy& policy) {
  if (policy.mode == BudgetPolicy::Mode::fixed) {
    if (policy.fixed_budget < 1) throw budget_error("fixed budget must be >= 1");
    return policy.fixed_budget;
  }
  int eta = effective_path_dimension(tree).eta;
  int order = std::max(1, (eta + 1) / 2);
  return std::min(order, std::max(1, policy.cap));
}

Attribution explain_tree_dfs(const TreeModel& tree, const std::vector<double>& x,
                             const QuadratureRule& rule) {
  validate_tree(tree);
  validate_instance(tree, x);
  validate_rule(rule);
  Attribution out;
  out.phi.assign(tree.feature_count, 0.0);
  PathEngine engine(tree, x, rule);
  engine.run(out.phi);
  out.budget = rule.order;
  out.exact = rule.order >= (effective_path_dimension(tree).eta + 1) / 2;
  return out;
}

Attribution explain_tree_direct(const TreeModel& tree, const std::vector<double>& x,
                                const QuadratureRule& rule) {
  validate_tree(tree);
  validate_instance(tree, x);
  validate_rule(rule);
  Attribution out;
  out.phi.assign(tree.feature_count, 0.0);
  LeafEnumerator direct(tree, x, rule);
  direct.run(out.phi);
  out.budget = rule.order;
  out.exact = rule.order >= (effective_path_dimension(tree).eta + 1) / 2;
  return out;
}

Attribution explain_ensemble(const TreeEnsemble& ensemble, const std::vector<double>& x,
                             const BudgetPolicy& policy, int threads) {
  validate_ensemble(ensemble);
  const std::size_t d = static_cast<std::size_t>(ensemble.feature_count);
  if (x.size() != d) throw dimension_mismatch("instance length does not match ensemble");
  for (double v : x)
    if (std::isnan(v)) throw invalid_input("instance contains NaN");

  const std::size_t n_trees = ensemble.trees.size();
  std::vector<std::vector<double>> partials(n_trees);
  std::vector<int> orders(n_trees, 0);
  std::vector<char> exact_flags(n_trees, 0);

  // One tree per work item: the per-tree result lands in its own slot, so
  // scheduling can never reorder the arithmetic.
  parallel_for(n_trees, threads, [&](std::size_t t) {
    const TreeModel& tree = ensemble.trees[t];
    int order = tree_rule_order(tree, policy);
    auto rule = cached_rule(order);
    std::vector<double> phi(d, 0.0);
    PathEngine engine(tree, x, *rule);
    engine.run(phi);
    partials[t] = std::move(phi);
    orders[t] = order;
    exact_flags[t] = order >= (effective_path_dimension(tree).eta + 1) / 2;
  });

  Attribution out;
  out.phi = combine_partials(
      std::move(partials), [](std::vector<double> a, const std::vector<double>& b) {
        for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
        return a;
      });
  out.budget = *std::max_element(orders.begin(), orders.end());
  out.exact = std::all_of(exact_flags.begin(), exact_flags.end(),
                          [](char f) { return f != 0; });
  return out;
}

double ensemble_value(const TreeEnsemble& ensemble, const std::vector<double>& x,
                      const std::vector<char>& subset) {
  double acc = 0.0;
  for (const TreeModel& tree : ensemble.trees) acc += tree_value(tree, x, subset);
  return acc;
}

Attribution ensemble_bruteforce(const TreeEnsemble& ensemble, const std::vector<double>& x) {
  validate_ensemble(ensemble);
  const int d = ensemble.feature_count;
  if (x.size() != static_cast<std::size_t>(d))
    throw dimension_mismatch("instance length does not match ensemble");
  if (d > 25) throw budget_error("tree brute force supports at most 25 features");

  // Value table over all subsets, then the weighted marginal sum.
  const std::size_t n_masks = std::size_t{1} << d;
  std::vector<double> value(n_masks);
  std::vector<char> subset(d, 0);
  for (std::size_t mask = 0; mask < n_masks; ++mask) {
    for (int j = 0; j < d; ++j) subset[j] = (mask >> j) & 1;
    value[mask] = ensemble_value(ensemble, x, subset);
  }

  Attribution out;
  out.phi.assign(d, 0.0);
  out.exact = true;
  for (int i = 0; i < d; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    double acc = 0.0;
    for (std::size_t mask = 0; mask < n_masks; ++mask) {
      if (mask & bit) continue;
      std::size_t s = static_cast<std::size_t>(__builtin_popcountll(mask));
      acc += shapley_weight(s, d) * (value[mask | bit] - value[mask]);
    }
    out.phi[i] = acc;
  }
  return out;
}

namespace detail {

bool dfs_state_restored(const TreeModel& tree, const std::vector<double>& x,
                        const QuadratureRule& rule) {
  validate_tree(tree);
  PathEngine engine(tree, x, rule);
  const std::vector<double> q_before = engine.path_coeffs();
  const std::vector<double> b_before = engine.node_products();
  std::vector<double> phi(tree.feature_count, 0.0);
  engine.run(phi);
  auto same_bits = [](const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
  };
  return same_bits(q_before, engine.path_coeffs()) &&
         same_bits(b_before, engine.node_products());
}

}  // namespace detail

double efficiency_violation(const TreeEnsemble& ensemble, const std::vector<double>& x,
                            const std::vector<double>& phi) {
  if (phi.size() != static_cast<std::size_t>(ensemble.feature_count))
    throw dimension_mismatch("phi length does not match ensemble");
  std::vector<char> all(ensemble.feature_count, 1);
  std::vector<char> none(ensemble.feature_count, 0);
  double expected = ensemble_value(ensemble, x, none);
  double fx = ensemble_value(ensemble, x, all);
  double s = 0.0, comp = 0.0;
  for (double v : phi) {
    double t = s + v;
    comp += (std::fabs(s) >= std::fabs(v)) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  return std::fabs(expected + (s + comp) - fx);
}

}  // namespace glshap
