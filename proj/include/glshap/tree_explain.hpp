#ifndef GLSHAP_TREE_EXPLAIN_HPP
#define GLSHAP_TREE_EXPLAIN_HPP

#include <vector>

#include "glshap/product_game.hpp"
#include "glshap/tree_model.hpp"

namespace glshap {

// How ensemble explanation picks each tree's rule order.
struct BudgetPolicy {
  // exact: order ceil(eta/2) per tree (the regime where the node sums
  // reproduce the Shapley values); fixed: one user-supplied order for all.
  enum class Mode { exact, fixed } mode = Mode::exact;
  int fixed_budget = 0;
  int cap = kDefaultBudgetCap;
};

// The rule order the policy assigns to one tree: ceil(eta/2) clamped to
// [1, cap] in exact mode, the fixed order otherwise.
int tree_rule_order(const TreeModel& tree, const BudgetPolicy& policy);

// Single-pass evaluator: one depth-first walk, maintaining per-node-location
// products B[r] and per-feature path coefficients, attributing through the
// telescoped edge differences. O(m |leaves|) time, O(m depth + d) memory.
Attribution explain_tree_dfs(const TreeModel& tree, const std::vector<double>& x,
                             const QuadratureRule& rule);

// Per-leaf evaluator: enumerates leaves and recombines each leaf's factor
// products directly. O(m |leaves| eta) time. Slower; kept as a structurally
// independent cross-check of the DFS.
Attribution explain_tree_direct(const TreeModel& tree, const std::vector<double>& x,
                                const QuadratureRule& rule);

// Sums per-tree attributions. Trees are processed in ensemble order with a
// fixed one-tree work grain, so phi is bit-identical for any worker count.
Attribution explain_ensemble(const TreeEnsemble& ensemble, const std::vector<double>& x,
                             const BudgetPolicy& policy = {}, int threads = 1);

// Exact values by subset enumeration over the ensemble's value function;
// feature_count <= 25.
Attribution ensemble_bruteforce(const TreeEnsemble& ensemble, const std::vector<double>& x);

// |E[f] + sum(phi) - f(x)|: the additivity residual of an attribution.
double efficiency_violation(const TreeEnsemble& ensemble, const std::vector<double>& x,
                            const std::vector<double>& phi);

double ensemble_value(const TreeEnsemble& ensemble, const std::vector<double>& x,
                      const std::vector<char>& subset);

namespace detail {
// Test hook: runs the single-pass walk and reports whether the path state
// (coefficients and node products) ends bit-identical to how it started.
bool dfs_state_restored(const TreeModel& tree, const std::vector<double>& x,
                        const QuadratureRule& rule);
}  // namespace detail

}  // namespace glshap

#endif
