#ifndef GLSHAP_QUADRATURE_HPP
#define GLSHAP_QUADRATURE_HPP

#include <memory>
#include <vector>

namespace glshap {

// Gauss-Legendre rule on [0, 1]. Nodes are strictly increasing and lie in
// the open interval; weights are positive and sum to one. Nodes and weights
// are symmetric about 1/2: node[q] + node[m-1-q] == 1 up to rounding, and
// the paired weights are bit-identical.
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Largest rule order the generator will accept.
inline constexpr int kMaxRuleOrder = 100000;

// Builds the order-m rule. Deterministic: the same m always yields the same
// bit pattern. Throws budget_error for m < 1 or m > kMaxRuleOrder.
QuadratureRule gauss_legendre_rule(int m);

// Cached, shared variant. Thread-safe; repeated calls return the same object.
std::shared_ptr<const QuadratureRule> cached_rule(int m);

// |sum_q w_q t_q^k - 1/(k+1)|. Zero (to rounding) whenever k <= 2m-1.
double monomial_exactness_defect(const QuadratureRule& rule, int k);

}  // namespace glshap

#endif
