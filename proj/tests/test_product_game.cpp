#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "glshap/errors.hpp"
#include "glshap/product_game.hpp"
#include "glshap/quadrature.hpp"
#include "glshap/synthetic.hpp"

using namespace glshap;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::fabs(a[i] - b[i]));
  return worst;
}

// s!(d-s-1)!/d! = 1/(d * C(d-1, s)) with an exact integer-product binomial
double rational_weight(int s, int d) {
  double c = 1.0;
  for (int i = 1; i <= s; ++i) c = c * (d - 1 - s + i) / i;
  return 1.0 / (static_cast<double>(d) * c);
}

}  // namespace

TEST_CASE("brute force reproduces hand-computed attributions") {
  // d=1: phi = u - 1
  Attribution a1 = shapley_bruteforce({{2.0}});
  REQUIRE(a1.phi.size() == 1);
  CHECK(a1.phi[0] == 1.0);
  CHECK(a1.exact);
  CHECK(a1.budget == 0);

  // d=2, u=[2,3]: phi_1 = (2-1)(1/2 + 1/2*3) = 2, phi_2 = (3-1)(1/2 + 1/2*2) = 3
  Attribution a2 = shapley_bruteforce({{2.0, 3.0}});
  CHECK(a2.phi[0] == 2.0);
  CHECK(a2.phi[1] == 3.0);

  // d=2, u=[-1,2]: phi_1 = -2 * (1/2 + 1) = -3, phi_2 = 1 * (1/2 - 1/2) = 0
  Attribution a3 = shapley_bruteforce({{-1.0, 2.0}});
  CHECK(a3.phi[0] == -3.0);
  CHECK(a3.phi[1] == 0.0);
}

TEST_CASE("brute force rejects empty and oversized games") {
  CHECK_THROWS_AS(shapley_bruteforce({{}}), invalid_input);
  std::vector<double> big(26, 2.0);
  CHECK_THROWS_AS(shapley_bruteforce({big}), budget_error);
  // 25 is still in range
  std::vector<double> edge(25, 1.0);
  CHECK_NOTHROW(shapley_bruteforce({edge}));
}

TEST_CASE("non-finite factors are rejected everywhere") {
  const double nan = std::nan("");
  const double inf = HUGE_VAL;
  auto rule = gauss_legendre_rule(3);
  CHECK_THROWS_AS(shapley_bruteforce({{1.0, nan}}), invalid_input);
  CHECK_THROWS_AS(shapley_quadrature({{1.0, inf}}, rule), invalid_input);
  CHECK_THROWS_AS(shapley_logspace_node({{-inf, 1.0}}, 0.5), invalid_input);
  CHECK_THROWS_AS(game_total_value({{nan}}), invalid_input);
  CHECK_THROWS_AS(shapley_quadrature({{}}, rule), invalid_input);
}

TEST_CASE("default budget is the half-dimension order under a cap") {
  CHECK(default_budget(1) == 1);
  CHECK(default_budget(9) == 5);
  CHECK(default_budget(10) == 5);
  CHECK(default_budget(798) == 399);
  CHECK(default_budget(800) == 400);
  CHECK(default_budget(5000) == 400);
  CHECK(default_budget(5000, 600) == 600);
  CHECK(default_budget(5000, 1 << 20) == 2500);
  CHECK_THROWS_AS(default_budget(0), invalid_input);
  CHECK_THROWS_AS(default_budget(10, 0), budget_error);
  CHECK_THROWS_AS(default_budget(10, -4), budget_error);
}

TEST_CASE("shapley weight matches the exact rational form") {
  CHECK(shapley_weight(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(shapley_weight(1, 3) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(shapley_weight(0, 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  for (int d = 1; d <= 25; ++d)
    for (int s = 0; s < d; ++s) {
      double w = shapley_weight(static_cast<std::size_t>(s), static_cast<std::size_t>(d));
      double r = rational_weight(s, d);
      CHECK(std::fabs(w - r) <= 1e-13 * r);
    }

  CHECK_THROWS_AS(shapley_weight(3, 3), invalid_input);
  CHECK_THROWS_AS(shapley_weight(0, 0), invalid_input);
}

TEST_CASE("quadrature of t^s (1-t)^(d-s-1) reproduces the weights") {
  for (int d = 1; d <= 12; ++d) {
    auto rule = gauss_legendre_rule((d + 1) / 2);
    for (int s = 0; s < d; ++s) {
      double est = 0.0;
      for (int q = 0; q < rule.order; ++q) {
        double t = rule.nodes[q];
        est += rule.weights[q] * std::pow(t, s) * std::pow(1.0 - t, d - s - 1);
      }
      CHECK(std::fabs(est - rational_weight(s, d)) <= 1e-14);
    }
  }
}

TEST_CASE("one-node rule is already exact at d=2") {
  auto rule = gauss_legendre_rule(1);

  Attribution a = shapley_quadrature({{2.0, 3.0}}, rule);
  CHECK(a.budget == 1);
  CHECK(a.exact);
  CHECK(a.phi[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(a.phi[1] == doctest::Approx(3.0).epsilon(1e-12));

  // the midpoint node transforms -1 to an exact zero, driving the
  // zero-tracking path: the non-zero feature's attribution is exactly 0
  Attribution b = shapley_quadrature({{-1.0, 2.0}}, rule);
  CHECK(b.phi[0] == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(b.phi[1] == 0.0);
}

TEST_CASE("two or more transformed zeros contribute nothing") {
  // at tau = 0.5 both -1 factors transform to exact zeros, so every
  // leave-one-out product at that node vanishes; the surviving nodes of a
  // 3-point rule still make the estimate exact for d=3
  ProductGame g{{-1.0, -1.0, 2.0}};
  Attribution q = shapley_quadrature(g, gauss_legendre_rule(3));
  Attribution bf = shapley_bruteforce(g);
  CHECK(max_abs_diff(q.phi, bf.phi) <= 1e-12);
}

TEST_CASE("null players get an exact zero") {
  Attribution a = shapley_quadrature({{2.0, 1.0, 3.0}}, gauss_legendre_rule(2));
  CHECK(a.phi[1] == 0.0);
  Attribution bf = shapley_bruteforce({{2.0, 1.0, 3.0}});
  CHECK(bf.phi[1] == 0.0);
  CHECK(max_abs_diff(a.phi, bf.phi) <= 1e-12);

  std::vector<double> ones(7, 1.0);
  Attribution b = shapley_quadrature({ones}, gauss_legendre_rule(4));
  for (double v : b.phi) CHECK(v == 0.0);
}

TEST_CASE("quadrature matches brute force on 200 random games") {
  synthetic::Rng rng(20240117);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    int d = 1 + trial % 12;
    ProductGame g = synthetic::random_game(rng, d, -2.0, 3.0);
    Attribution q = shapley_quadrature(g, gauss_legendre_rule((d + 1) / 2));
    CHECK(q.exact);
    Attribution bf = shapley_bruteforce(g);
    worst = std::max(worst, max_abs_diff(q.phi, bf.phi));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("under-budget rules approximate and say so") {
  synthetic::Rng rng(7);
  ProductGame g = synthetic::random_game(rng, 12, -2.0, 3.0);
  Attribution bf = shapley_bruteforce(g);

  Attribution lo = shapley_quadrature(g, gauss_legendre_rule(3));
  CHECK_FALSE(lo.exact);
  CHECK(lo.budget == 3);

  Attribution hi = shapley_quadrature(g, gauss_legendre_rule(6));
  CHECK(hi.exact);
  CHECK(max_abs_diff(hi.phi, bf.phi) <= 1e-10);
  CHECK(max_abs_diff(lo.phi, bf.phi) >= max_abs_diff(hi.phi, bf.phi));
}

TEST_CASE("attribution is permutation-equivariant to the bit") {
  synthetic::Rng rng(99);
  const int d = 97;
  ProductGame g = synthetic::random_game(rng, d, -2.0, 3.0);
  g.factors[10] = g.factors[80];  // duplicates must not break anything
  g.factors[3] = 1.0;
  auto rule = gauss_legendre_rule((d + 1) / 2);
  Attribution base = shapley_quadrature(g, rule);

  ProductGame rev{std::vector<double>(g.factors.rbegin(), g.factors.rend())};
  Attribution ar = shapley_quadrature(rev, rule);
  for (int j = 0; j < d; ++j) CHECK(ar.phi[j] == base.phi[d - 1 - j]);

  ProductGame rot;
  rot.factors.resize(d);
  for (int k = 0; k < d; ++k) rot.factors[k] = g.factors[(k + 17) % d];
  Attribution at = shapley_quadrature(rot, rule);
  for (int k = 0; k < d; ++k) CHECK(at.phi[k] == base.phi[(k + 17) % d]);
}

TEST_CASE("weighted sums attribute mixtures") {
  synthetic::Rng rng(31);
  ProductGame g = synthetic::random_game(rng, 9, -2.0, 3.0);
  auto rule = gauss_legendre_rule(5);
  Attribution direct = shapley_quadrature(g, rule);

  // a unit-weight singleton is the same computation
  Attribution one = shapley_weighted_sum({{1.0, g}}, rule);
  for (std::size_t j = 0; j < 9; ++j) CHECK(one.phi[j] == direct.phi[j]);

  // 2g - g telescopes exactly (the partial products are identical bits,
  // and 2x - x is exact in binary floating point)
  Attribution two = shapley_weighted_sum({{2.0, g}, {-1.0, g}}, rule);
  for (std::size_t j = 0; j < 9; ++j) CHECK(two.phi[j] == direct.phi[j]);

  // frozen mixture: 0.5*[2,3] + 0.5*[-1,2] under the midpoint rule
  Attribution mix = shapley_weighted_sum(
      {{0.5, {{2.0, 3.0}}}, {0.5, {{-1.0, 2.0}}}}, gauss_legendre_rule(1));
  CHECK(mix.phi[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(mix.phi[1] == doctest::Approx(1.5).epsilon(1e-12));

  CHECK_THROWS_AS(shapley_weighted_sum({}, rule), invalid_input);
  CHECK_THROWS_AS(shapley_weighted_sum({{1.0, {{2.0, 3.0}}}, {1.0, {{2.0}}}}, rule),
                  dimension_mismatch);
  CHECK_THROWS_AS(shapley_weighted_sum({{std::nan(""), g}}, rule), invalid_input);
}

TEST_CASE("total value and the efficiency residual") {
  CHECK(game_total_value({{2.0, 3.0}}) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(game_total_value({{0.5}}) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(game_total_value({{0.0, 5.0}}) == -1.0);
  std::vector<double> huge(1100, 2.0);
  CHECK(std::isinf(game_total_value({huge})));

  CHECK(efficiency_gap({{2.0, 3.0}}, {2.0, 3.0}) == 0.0);
  CHECK(efficiency_gap({{2.0, 3.0}}, {2.0, 3.1}) ==
        doctest::Approx(0.1 / 6.0).epsilon(1e-12));
  CHECK_THROWS_AS(efficiency_gap({{2.0, 3.0}}, {1.0}), dimension_mismatch);
}

TEST_CASE("efficiency holds in the exact regime at medium dimension") {
  synthetic::Rng rng(6021023);
  ProductGame g;
  g.factors.resize(501);
  for (double& u : g.factors) u = rng.uniform(0.9, 1.1);
  Attribution a = shapley_quadrature(g, gauss_legendre_rule(251));
  CHECK(a.exact);
  CHECK(efficiency_gap(g, a.phi) <= 1e-10);
}
