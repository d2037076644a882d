#include "glshap/quadrature.hpp"

#include <cmath>
#include <mutex>
#include <unordered_map>

#include "glshap/errors.hpp"

namespace glshap {
namespace {

// Legendre P_m and its derivative at x, by the three-term recurrence.
// Returns {P_m(x), P'_m(x)}.
inline std::pair<double, double> legendre_pair(int m, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (m == 0) return {p0, 0.0};
  for (int k = 2; k <= m; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  // P'_m(x) = m (x P_m - P_{m-1}) / (x^2 - 1); x is an interior point here.
  double dp = m * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

// k-th root of P_m on (-1, 1), k = 1.. m, counted from the +1 end.
// Newton from the Chebyshev-angle seed; falls back to bisection between the
// interlacing Chebyshev brackets if Newton has not settled after 100 steps.
double legendre_root(int m, int k) {
  const double pi = 3.14159265358979323846;
  double x = std::cos(pi * (k - 0.25) / (m + 0.5));
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    auto [p, dp] = legendre_pair(m, x);
    double dx = p / dp;
    x -= dx;
    if (std::fabs(dx) <= 1e-15) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    // Roots interlace the Chebyshev extrema angles; bisect that bracket.
    double lo = std::cos(pi * static_cast<double>(k) / (m + 0.5));
    double hi = std::cos(pi * (k - 1.0) / (m + 0.5));
    double flo = legendre_pair(m, lo).first;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      double fmid = legendre_pair(m, mid).first;
      if ((flo < 0) == (fmid < 0)) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
      }
    }
    x = 0.5 * (lo + hi);
  }
  return x;
}

}  // namespace

QuadratureRule gauss_legendre_rule(int m) {
  if (m < 1) throw budget_error("quadrature order must be >= 1, got " + std::to_string(m));
  if (m > kMaxRuleOrder)
    throw budget_error("quadrature order " + std::to_string(m) + " exceeds cap " +
                       std::to_string(kMaxRuleOrder));

  QuadratureRule rule;
  rule.order = m;
  rule.nodes.resize(m);
  rule.weights.resize(m);

  // Compute the positive-axis roots (k = 1 .. m/2, nearest +1 first) and
  // mirror them so the rule is symmetric by construction. Odd m pins the
  // middle node at exactly 1/2.
  for (int k = 1; k <= m / 2; ++k) {
    double x = legendre_root(m, k);
    auto [p, dp] = legendre_pair(m, x);
    (void)p;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    double half = 0.5 * x;
    // Map [-1,1] -> [0,1]: t = (1+x)/2, weight halves.
    rule.nodes[m - k] = 0.5 + half;
    rule.nodes[k - 1] = 0.5 - half;
    rule.weights[m - k] = 0.5 * w;
    rule.weights[k - 1] = 0.5 * w;
  }
  if (m % 2 == 1) {
    int mid = m / 2;
    auto [p, dp] = legendre_pair(m, 0.0);
    (void)p;
    rule.nodes[mid] = 0.5;
    rule.weights[mid] = 0.5 * (2.0 / (dp * dp));
  }
  return rule;
}

std::shared_ptr<const QuadratureRule> cached_rule(int m) {
  static std::mutex mu;
  static std::unordered_map<int, std::shared_ptr<const QuadratureRule>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const QuadratureRule>(gauss_legendre_rule(m));
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(m, rule);
  (void)inserted;
  return it->second;
}

double monomial_exactness_defect(const QuadratureRule& rule, int k) {
  if (k < 0) throw invalid_input("monomial degree must be >= 0");
  double acc = 0.0;
  for (int q = 0; q < rule.order; ++q) acc += rule.weights[q] * std::pow(rule.nodes[q], k);
  return std::fabs(acc - 1.0 / (k + 1.0));
}

}  // namespace glshap
