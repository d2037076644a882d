#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "glshap/errors.hpp"
#include "glshap/quadrature.hpp"
#include "glshap/synthetic.hpp"
#include "glshap/tree_explain.hpp"
#include "glshap/tree_model.hpp"

using namespace glshap;

namespace {

TreeNode split(int f, double thr, int l, int r, double pl) {
  TreeNode n;
  n.feature = f;
  n.threshold = thr;
  n.left = l;
  n.right = r;
  n.left_fraction = pl;
  return n;
}

TreeNode leaf(double v) {
  TreeNode n;
  n.value = v;
  return n;
}

// one split on feature 0 at threshold 0: left mass 1/2 pays 10, right 20
TreeModel two_leaf(int feature_count = 1) {
  TreeModel t;
  t.feature_count = feature_count;
  t.nodes = {split(0, 0.0, 1, 2, 0.5), leaf(10.0), leaf(20.0)};
  return t;
}

// `length` splits chained down the left side; right children are leaves
TreeModel left_chain(int length, bool distinct_features, double pl) {
  TreeModel t;
  t.feature_count = distinct_features ? length : 1;
  for (int i = 0; i < length; ++i) {
    int self = static_cast<int>(t.nodes.size());
    t.nodes.push_back(split(distinct_features ? i : 0, 0.0, self + 2, self + 1, pl));
    t.nodes.push_back(leaf(static_cast<double>(i + 1)));
  }
  t.nodes.push_back(leaf(100.0));
  // the "left" child ids above point past the right leaf; fix them up
  for (int i = 0; i < length; ++i) t.nodes[2 * i].left = 2 * i + 2;
  return t;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::fabs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("subset values of a single split") {
  TreeModel t = two_leaf();
  std::vector<double> x{-1.0};
  CHECK(tree_value(t, x, {0}) == 15.0);  // 0.5*10 + 0.5*20
  CHECK(tree_value(t, x, {1}) == 10.0);  // conditioning on feature 0 follows x

  // ties go left
  CHECK(tree_value(t, {0.0}, {1}) == 10.0);
  CHECK(tree_value(t, {0.25}, {1}) == 20.0);

  CHECK(edge_factor(t, 0, true, x) == 2.0);
  CHECK(edge_factor(t, 0, false, x) == 0.0);
  CHECK_THROWS_AS(edge_factor(t, 1, true, x), invalid_input);

  CHECK(leaf_count(t) == 2);
}

TEST_CASE("single split attribution is the value shift") {
  TreeModel t = two_leaf();
  auto rule = gauss_legendre_rule(1);
  Attribution a = explain_tree_dfs(t, {-1.0}, rule);
  REQUIRE(a.phi.size() == 1);
  CHECK(a.phi[0] == doctest::Approx(-5.0).epsilon(1e-12));
  CHECK(a.exact);

  // off-path features keep a bit-exact zero
  TreeModel t3 = two_leaf(3);
  Attribution a3 = explain_tree_dfs(t3, {-1.0, 4.0, -9.0}, rule);
  CHECK(a3.phi[0] == doctest::Approx(-5.0).epsilon(1e-12));
  CHECK(a3.phi[1] == 0.0);
  CHECK(a3.phi[2] == 0.0);
}

TEST_CASE("a lone leaf attributes nothing") {
  TreeModel t;
  t.feature_count = 2;
  t.nodes = {leaf(7.0)};
  Attribution a = explain_tree_dfs(t, {0.0, 0.0}, gauss_legendre_rule(1));
  CHECK(a.phi[0] == 0.0);
  CHECK(a.phi[1] == 0.0);
  CHECK(a.exact);
  PathShape s = effective_path_dimension(t);
  CHECK(s.eta == 0);
  CHECK(s.depth == 0);
}

TEST_CASE("path shape separates distinct features from depth") {
  PathShape one = effective_path_dimension(two_leaf());
  CHECK(one.eta == 1);
  CHECK(one.depth == 1);

  PathShape chain = effective_path_dimension(left_chain(5, false, 0.5));
  CHECK(chain.eta == 1);
  CHECK(chain.depth == 5);

  PathShape wide = effective_path_dimension(left_chain(5, true, 0.5));
  CHECK(wide.eta == 5);
  CHECK(wide.depth == 5);

  // a balanced tree splitting a fresh feature per level
  TreeModel b;
  b.feature_count = 3;
  b.nodes = {split(0, 0.0, 1, 2, 0.5),  split(1, 0.0, 3, 4, 0.5),
             split(1, 0.0, 5, 6, 0.5),  split(2, 0.0, 7, 8, 0.5),
             leaf(1.0),                 leaf(2.0),
             leaf(3.0),                 leaf(4.0),
             leaf(5.0)};
  PathShape bs = effective_path_dimension(b);
  CHECK(bs.eta == 3);
  CHECK(bs.depth == 3);
}

TEST_CASE("budget policy resolves per tree") {
  TreeModel t5 = left_chain(5, true, 0.4);
  CHECK(tree_rule_order(t5, {}) == 3);  // ceil(5/2)

  BudgetPolicy capped;
  capped.cap = 2;
  CHECK(tree_rule_order(t5, capped) == 2);

  BudgetPolicy fixed;
  fixed.mode = BudgetPolicy::Mode::fixed;
  fixed.fixed_budget = 7;
  CHECK(tree_rule_order(t5, fixed) == 7);
  fixed.fixed_budget = 0;
  CHECK_THROWS_AS(tree_rule_order(t5, fixed), budget_error);

  Attribution lo = explain_tree_dfs(left_chain(8, true, 0.5),
                                    std::vector<double>(8, -1.0),
                                    gauss_legendre_rule(2));
  CHECK_FALSE(lo.exact);  // needs ceil(8/2) = 4
  Attribution hi = explain_tree_dfs(left_chain(8, true, 0.5),
                                    std::vector<double>(8, -1.0),
                                    gauss_legendre_rule(4));
  CHECK(hi.exact);
}

TEST_CASE("both evaluators match brute force on random trees") {
  synthetic::Rng rng(20240119);
  double worst_pair = 0.0, worst_oracle = 0.0;
  for (int trial = 0; trial < 120; ++trial) {
    int d = 1 + trial % 10;
    TreeModel t = synthetic::random_tree(rng, d, 6, 20);
    std::vector<double> x = synthetic::random_instance(rng, d);
    auto rule = gauss_legendre_rule(tree_rule_order(t, {}));

    Attribution dfs = explain_tree_dfs(t, x, rule);
    Attribution direct = explain_tree_direct(t, x, rule);
    worst_pair = std::max(worst_pair, max_abs_diff(dfs.phi, direct.phi));

    TreeEnsemble e;
    e.feature_count = d;
    e.trees = {t};
    Attribution bf = ensemble_bruteforce(e, x);
    worst_oracle = std::max(worst_oracle, max_abs_diff(dfs.phi, bf.phi));
  }
  CHECK(worst_pair <= 1e-10);
  CHECK(worst_oracle <= 1e-10);
}

TEST_CASE("a depth-60 chain stays stable") {
  // sixty splits on one feature, mass 0.3 per step: the path coefficient
  // reaches (1/0.3)^60 ~ 1e31 while every attribution stays modest
  TreeModel t = left_chain(60, false, 0.3);
  std::vector<double> x{-1.0};
  auto rule = gauss_legendre_rule(1);  // eta = 1
  Attribution dfs = explain_tree_dfs(t, x, rule);
  Attribution direct = explain_tree_direct(t, x, rule);
  CHECK(dfs.exact);
  CHECK(std::isfinite(dfs.phi[0]));
  CHECK(max_abs_diff(dfs.phi, direct.phi) <= 1e-9);

  TreeEnsemble e;
  e.feature_count = 1;
  e.trees = {t};
  CHECK(efficiency_violation(e, x, dfs.phi) <= 1e-9);
}

TEST_CASE("the walk restores its state to the bit") {
  synthetic::Rng rng(424242);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 2 + trial % 8;
    TreeModel t = synthetic::random_tree(rng, d, 7, 24);
    std::vector<double> x = synthetic::random_instance(rng, d);
    auto rule = gauss_legendre_rule(3 + trial % 4);
    CHECK(detail::dfs_state_restored(t, x, rule));
  }
}

TEST_CASE("ensembles are linear in the trees") {
  synthetic::Rng rng(8080);
  TreeModel t = synthetic::random_tree(rng, 6, 5, 16);
  std::vector<double> x = synthetic::random_instance(rng, 6);

  TreeEnsemble single;
  single.feature_count = 6;
  single.trees = {t};

  TreeModel halved = t;
  for (TreeNode& n : halved.nodes)
    if (n.is_leaf()) n.value *= 0.5;
  TreeEnsemble doubled;
  doubled.feature_count = 6;
  doubled.trees = {halved, halved};

  Attribution a = explain_ensemble(single, x);
  Attribution b = explain_ensemble(doubled, x);
  // halving values halves every intermediate exactly, and the two halves
  // add back to the original bits
  for (std::size_t j = 0; j < 6; ++j) CHECK(a.phi[j] == b.phi[j]);

  // a one-tree ensemble is the plain evaluator
  auto rule = cached_rule(tree_rule_order(t, {}));
  Attribution direct = explain_tree_dfs(t, x, *rule);
  for (std::size_t j = 0; j < 6; ++j) CHECK(a.phi[j] == direct.phi[j]);
  CHECK(a.budget == direct.budget);
  CHECK(a.exact == direct.exact);
}

TEST_CASE("ensemble attribution closes additively and ignores worker count") {
  synthetic::Rng rng(1234);
  TreeEnsemble e = synthetic::random_ensemble(rng, 15, 20, 7, 16);
  std::vector<double> x = synthetic::random_instance(rng, 15);

  Attribution base = explain_ensemble(e, x, {}, 1);
  CHECK(base.exact);
  CHECK(efficiency_violation(e, x, base.phi) <= 1e-9);

  for (int threads : {2, 4, 8}) {
    Attribution a = explain_ensemble(e, x, {}, threads);
    for (std::size_t j = 0; j < 15; ++j) CHECK(a.phi[j] == base.phi[j]);
  }
}

TEST_CASE("structural validation rejects malformed trees") {
  std::vector<double> x{0.0, 0.0};
  auto rule = gauss_legendre_rule(2);
  auto reject = [&](TreeModel t) {
    CHECK_THROWS_AS(explain_tree_dfs(t, x, rule), invalid_input);
  };

  TreeModel t;
  t.feature_count = 2;

  t.nodes = {};
  reject(t);

  // child points back at the root
  t.nodes = {split(0, 0.0, 1, 0, 0.5), leaf(1.0)};
  reject(t);

  // shared child
  t.nodes = {split(0, 0.0, 1, 1, 0.5), leaf(1.0)};
  reject(t);

  // child id out of range
  t.nodes = {split(0, 0.0, 1, 5, 0.5), leaf(1.0)};
  reject(t);

  // missing child on an internal node
  t.nodes = {split(0, 0.0, 1, -1, 0.5), leaf(1.0)};
  reject(t);

  // unreachable extra node
  t.nodes = {split(0, 0.0, 1, 2, 0.5), leaf(1.0), leaf(2.0), leaf(3.0)};
  reject(t);

  // split feature outside the instance space
  t.nodes = {split(2, 0.0, 1, 2, 0.5), leaf(1.0), leaf(2.0)};
  reject(t);

  // degenerate and out-of-range masses
  for (double bad : {0.0, 1.0, -0.25, 1.5}) {
    t.nodes = {split(0, 0.0, 1, 2, bad), leaf(1.0), leaf(2.0)};
    reject(t);
  }

  // non-finite threshold / leaf value
  t.nodes = {split(0, std::nan(""), 1, 2, 0.5), leaf(1.0), leaf(2.0)};
  reject(t);
  t.nodes = {split(0, 0.0, 1, 2, 0.5), leaf(std::nan("")), leaf(2.0)};
  reject(t);

  t.nodes = {leaf(1.0)};
  t.feature_count = 0;
  reject(t);
}

TEST_CASE("instance validation") {
  TreeModel t = two_leaf(2);
  auto rule = gauss_legendre_rule(1);
  CHECK_THROWS_AS(explain_tree_dfs(t, {0.0}, rule), dimension_mismatch);
  CHECK_THROWS_AS(explain_tree_dfs(t, {std::nan(""), 0.0}, rule), invalid_input);
  CHECK_THROWS_AS(tree_value(t, {std::nan(""), 0.0}, {1, 1}), invalid_input);
}

TEST_CASE("ensemble-level guards") {
  TreeEnsemble empty;
  empty.feature_count = 4;
  CHECK_THROWS_AS(explain_ensemble(empty, {0.0, 0.0, 0.0, 0.0}), invalid_input);

  TreeEnsemble mismatch;
  mismatch.feature_count = 4;
  mismatch.trees = {two_leaf(2)};
  CHECK_THROWS_AS(explain_ensemble(mismatch, {0.0, 0.0, 0.0, 0.0}), dimension_mismatch);

  TreeEnsemble wide;
  wide.feature_count = 26;
  TreeModel lone;
  lone.feature_count = 26;
  lone.nodes = {leaf(1.0)};
  wide.trees = {lone};
  CHECK_THROWS_AS(ensemble_bruteforce(wide, std::vector<double>(26, 0.0)), budget_error);
}
