#ifndef GLSHAP_PRODUCT_GAME_HPP
#define GLSHAP_PRODUCT_GAME_HPP

#include <cstddef>
#include <vector>

#include "glshap/quadrature.hpp"
#include "glshap/signed_log.hpp"

namespace glshap {

// Coalition game whose value is the product of the member factors, with
// v(empty) = 1. Fully described by the per-feature factors u_j.
struct ProductGame {
  std::vector<double> factors;
  std::size_t dimension() const { return factors.size(); }
};

// Attribution result. exact means the rule order met the half-dimension
// threshold, so the node sum reproduces the exact Shapley values (up to
// roundoff) rather than approximating them.
struct Attribution {
  std::vector<double> phi;
  int budget = 0;
  bool exact = false;
};

// A game scaled by a coefficient; weighted sums attribute mixtures.
struct WeightedGame {
  double weight = 1.0;
  ProductGame game;
};

inline constexpr int kDefaultBudgetCap = 400;

// ceil(d/2) capped: the order that makes the estimator exact, unless the
// cap binds first.
int default_budget(std::size_t dimension, int cap = kDefaultBudgetCap);

// Shapley kernel weight |S|!(d-|S|-1)!/d! via log-gamma. s in [0, d-1].
double shapley_weight(std::size_t subset_size, std::size_t dimension);

// Exact Shapley values by direct subset enumeration. O(d 2^d); rejects
// d > 25 and d == 0.
Attribution shapley_bruteforce(const ProductGame& game);

// Node-level signed log product of the transformed factors
// T_j = (1-tau) + tau u_j. Exact zeros are tracked apart from the
// magnitude; no epsilon thresholds anywhere.
SignedLogProduct shapley_logspace_node(const ProductGame& game, double tau);

// Quadrature attribution through the signed log-space path. Rejects
// non-finite factors and d == 0.
Attribution shapley_quadrature(const ProductGame& game, const QuadratureRule& rule);

// Attribution of sum_k w_k * game_k; all games must share one dimension.
Attribution shapley_weighted_sum(const std::vector<WeightedGame>& terms,
                                 const QuadratureRule& rule);

// v(full) - v(empty) = prod(u) - 1, evaluated through logs so huge games
// degrade to 0/inf instead of corrupting intermediate products.
double game_total_value(const ProductGame& game);

// |sum(phi) - (v(full) - v(empty))| / max(1, |v(full)|); the additivity
// residual used by the verify paths.
double efficiency_gap(const ProductGame& game, const std::vector<double>& phi);

namespace detail {

// Scratch shared across nodes/games so the per-node arrays are allocated once.
struct GameScratch {
  std::vector<double> transformed;
  std::vector<double> log_abs;
  std::vector<double> sign;
  std::vector<double> node_acc;
  std::vector<double> acc;
};

// Core loop: adds this game's per-node contributions into scratch.acc
// (which must hold `dimension` zeros or prior partials scaled the same
// way). Factors are validated by the callers.
void accumulate_quadrature(const ProductGame& game, const QuadratureRule& rule,
                           double weight, GameScratch& scratch);

}  // namespace detail

}  // namespace glshap

#endif
