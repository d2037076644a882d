#include "glshap/product_game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glshap/errors.hpp"
#include "glshap/kernels.hpp"

namespace glshap {
namespace {

void validate_game(const ProductGame& game) {
  if (game.dimension() == 0) throw invalid_input("game has no features");
  for (std::size_t j = 0; j < game.dimension(); ++j)
    if (!std::isfinite(game.factors[j]))
      throw invalid_input("factor " + std::to_string(j) + " is not finite");
}

// Exact binomial for the small dimensions the brute-force path accepts.
double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Adds prod over every subset of others[idx..] into by_size, bucketed by
// subset cardinality. Visits each subset exactly once.
void subset_products(const std::vector<double>& others, std::size_t idx,
                     std::size_t count, double prod, std::vector<double>& by_size) {
  if (idx == others.size()) {
    by_size[count] += prod;
    return;
  }
  subset_products(others, idx + 1, count, prod, by_size);
  subset_products(others, idx + 1, count + 1, prod * others[idx], by_size);
}

}  // namespace

int default_budget(std::size_t dimension, int cap) {
  if (dimension == 0) throw invalid_input("game has no features");
  if (cap < 1) throw budget_error("budget cap must be >= 1");
  std::size_t exact_order = (dimension + 1) / 2;
  return exact_order < static_cast<std::size_t>(cap) ? static_cast<int>(exact_order) : cap;
}

double shapley_weight(std::size_t subset_size, std::size_t dimension) {
  if (dimension < 1 || subset_size >= dimension)
    throw invalid_input("subset size must satisfy 0 <= s <= d-1");
  double s = static_cast<double>(subset_size);
  double d = static_cast<double>(dimension);
  return std::exp(std::lgamma(s + 1.0) + std::lgamma(d - s) - std::lgamma(d + 1.0));
}

Attribution shapley_bruteforce(const ProductGame& game) {
  validate_game(game);
  const std::size_t d = game.dimension();
  if (d > 25) throw budget_error("brute force supports at most 25 features, got " +
                                 std::to_string(d));

  Attribution out;
  out.phi.assign(d, 0.0);
  out.budget = 0;
  out.exact = true;

  std::vector<double> others(d - 1);
  std::vector<double> by_size(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    others.clear();
    for (std::size_t j = 0; j < d; ++j)
      if (j != i) others.push_back(game.factors[j]);
    std::fill(by_size.begin(), by_size.end(), 0.0);
    subset_products(others, 0, 0, 1.0, by_size);
    // mu(s) = s!(d-s-1)!/d! = 1 / (d * C(d-1, s)), exact in double at d <= 25
    double acc = 0.0;
    for (std::size_t s = 0; s < d; ++s)
      acc += by_size[s] / (static_cast<double>(d) * binomial(static_cast<int>(d) - 1,
                                                             static_cast<int>(s)));
    out.phi[i] = (game.factors[i] - 1.0) * acc;
  }
  return out;
}

SignedLogProduct shapley_logspace_node(const ProductGame& game, double tau) {
  validate_game(game);
  if (!(tau >= 0.0 && tau <= 1.0)) throw invalid_input("node location must lie in [0, 1]");
  const std::size_t d = game.dimension();
  std::vector<double> t(d), logabs(d), sgn(d);
  kernels::ops().affine_combine(tau, game.factors.data(), d, t.data());
  return signed_log_product(t.data(), d, logabs.data(), sgn.data());
}

namespace detail {

void accumulate_quadrature(const ProductGame& game, const QuadratureRule& rule,
                           double weight, GameScratch& scratch) {
  const std::size_t d = game.dimension();
  const auto& ops = kernels::ops();
  scratch.transformed.resize(d);
  scratch.log_abs.resize(d);
  scratch.sign.resize(d);
  std::vector<double>& node_acc = scratch.node_acc;
  node_acc.assign(d, 0.0);

  for (int q = 0; q < rule.order; ++q) {
    const double tau = rule.nodes[q];
    const double w = rule.weights[q];
    ops.affine_combine(tau, game.factors.data(), d, scratch.transformed.data());
    SignedLogProduct p = signed_log_product(scratch.transformed.data(), d,
                                            scratch.log_abs.data(), scratch.sign.data());
    if (p.zero_count == 0) {
      ops.loo_accumulate(node_acc.data(), scratch.log_abs.data(), scratch.sign.data(),
                         d, p.log_magnitude, static_cast<double>(p.sign), w);
    } else if (p.zero_count == 1) {
      // Only the zero factor's leave-one-out product survives; its sign is
      // the parity of the remaining factors.
      int neg = 0;
      for (std::size_t j = 0; j < d; ++j)
        if (scratch.sign[j] < 0.0) neg ^= 1;
      double sp = neg ? -1.0 : 1.0;
      node_acc[p.zero_index] += w * sp * std::exp(p.log_magnitude);
    }
    // two or more exact zeros: every leave-one-out product is zero
  }

  for (std::size_t i = 0; i < d; ++i) {
    double ui = game.factors[i];
    if (ui != 1.0) scratch.acc[i] += weight * ((ui - 1.0) * node_acc[i]);
  }
}

}  // namespace detail

Attribution shapley_quadrature(const ProductGame& game, const QuadratureRule& rule) {
  validate_game(game);
  const std::size_t d = game.dimension();
  detail::GameScratch scratch;
  scratch.acc.assign(d, 0.0);
  detail::accumulate_quadrature(game, rule, 1.0, scratch);

  Attribution out;
  out.phi = std::move(scratch.acc);
  out.budget = rule.order;
  out.exact = static_cast<std::size_t>(rule.order) >= (d + 1) / 2;
  return out;
}

Attribution shapley_weighted_sum(const std::vector<WeightedGame>& terms,
                                 const QuadratureRule& rule) {
  if (terms.empty()) throw invalid_input("weighted sum needs at least one game");
  const std::size_t d = terms.front().game.dimension();
  for (const auto& term : terms) {
    validate_game(term.game);
    if (term.game.dimension() != d)
      throw dimension_mismatch("weighted games disagree on dimension: " +
                               std::to_string(term.game.dimension()) + " vs " +
                               std::to_string(d));
    if (!std::isfinite(term.weight)) throw invalid_input("game weight is not finite");
  }

  detail::GameScratch scratch;
  scratch.acc.assign(d, 0.0);
  for (const auto& term : terms)
    detail::accumulate_quadrature(term.game, rule, term.weight, scratch);

  Attribution out;
  out.phi = std::move(scratch.acc);
  out.budget = rule.order;
  out.exact = static_cast<std::size_t>(rule.order) >= (d + 1) / 2;
  return out;
}

double game_total_value(const ProductGame& game) {
  validate_game(game);
  ExactLogSum logs;
  int neg = 0;
  int zeros = 0;
  for (double u : game.factors) {
    if (u == 0.0) {
      ++zeros;
    } else {
      logs.add(std::log(std::fabs(u)));
      if (u < 0.0) neg ^= 1;
    }
  }
  double v_full = zeros > 0 ? 0.0 : (neg ? -1.0 : 1.0) * std::exp(logs.value());
  return v_full - 1.0;
}

double efficiency_gap(const ProductGame& game, const std::vector<double>& phi) {
  if (phi.size() != game.dimension())
    throw dimension_mismatch("phi length does not match game dimension");
  // Neumaier-compensated sum: measures the real-number sum of the phi values.
  double s = 0.0, comp = 0.0;
  for (double v : phi) {
    double t = s + v;
    comp += (std::fabs(s) >= std::fabs(v)) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  double total = s + comp;

  double v_total = game_total_value(game);
  if (!std::isfinite(v_total)) {
    // Product overflows doubles: compare in the log domain instead. A zero
    // factor can't reach here, so every log is finite.
    ExactLogSum logs;
    for (double u : game.factors) logs.add(std::log(std::fabs(u)));
    double log_full = logs.value();
    double lhs = std::log(std::fabs(total + 1.0));
    return std::fabs(lhs - log_full) / std::max(1.0, std::fabs(log_full));
  }
  double v_full = v_total + 1.0;
  return std::fabs(total - v_total) / std::max(1.0, std::fabs(v_full));
}

}  // namespace glshap
