#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "glshap/product_game.hpp"
#include "glshap/signed_log.hpp"

using namespace glshap;

TEST_CASE("transformed product of positive factors") {
  // u=[2,3] at tau=0.5: T = [1.5, 2.0], product 3
  ProductGame game{{2.0, 3.0}};
  SignedLogProduct p = shapley_logspace_node(game, 0.5);
  CHECK(p.sign == 1);
  CHECK(p.zero_count == 0);
  CHECK(p.zero_index == -1);
  CHECK(std::fabs(p.log_magnitude - std::log(3.0)) < 1e-15);
}

TEST_CASE("an exact zero factor is tracked, not logged") {
  // u=[-1,2] at tau=0.5: T1 = 0 exactly, T2 = 1.5
  ProductGame game{{-1.0, 2.0}};
  SignedLogProduct p = shapley_logspace_node(game, 0.5);
  CHECK(p.sign == 0);
  CHECK(p.zero_count == 1);
  CHECK(p.zero_index == 0);  // first factor, 0-based
  CHECK(std::fabs(p.log_magnitude - std::log(1.5)) < 1e-15);
}

TEST_CASE("all-ones game is the unit product") {
  ProductGame game{{1.0, 1.0, 1.0}};
  for (double tau : {0.1, 0.3, 0.7}) {
    SignedLogProduct p = shapley_logspace_node(game, tau);
    CHECK(p.log_magnitude == 0.0);
    CHECK(p.sign == 1);
    CHECK(p.zero_count == 0);
  }
}

TEST_CASE("two zeros leave no defined zero index") {
  ProductGame game{{-1.0, -1.0, 2.0}};
  SignedLogProduct p = shapley_logspace_node(game, 0.5);
  CHECK(p.sign == 0);
  CHECK(p.zero_count == 2);
  CHECK(p.zero_index == -1);
}

TEST_CASE("negative signs multiply out") {
  // u=[-3,-3] at tau=0.5: T = [-1,-1], product +1
  ProductGame game{{-3.0, -3.0}};
  SignedLogProduct p = shapley_logspace_node(game, 0.5);
  CHECK(p.sign == 1);
  CHECK(p.zero_count == 0);
  CHECK(std::fabs(p.log_magnitude) < 1e-15);

  // one negative factor flips the sign
  ProductGame game2{{-3.0, 2.0}};
  SignedLogProduct p2 = shapley_logspace_node(game2, 0.5);
  CHECK(p2.sign == -1);
}

TEST_CASE("tau domain is enforced") {
  ProductGame game{{2.0}};
  CHECK_THROWS(shapley_logspace_node(game, -0.2));
  CHECK_THROWS(shapley_logspace_node(game, 1.5));
  // endpoints are well-defined: tau=0 transforms every factor to 1
  SignedLogProduct p = shapley_logspace_node(game, 0.0);
  CHECK(p.log_magnitude == 0.0);
  CHECK(p.sign == 1);
}

TEST_CASE("exact accumulator ignores addition order") {
  std::mt19937_64 eng(123);
  std::vector<double> xs(513);
  for (double& x : xs) {
    double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    x = (u - 0.5) * 80.0;  // mixed signs, log-magnitude scale
  }

  ExactLogSum forward;
  for (double x : xs) forward.add(x);

  ExactLogSum backward;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) backward.add(*it);

  std::vector<double> shuffled = xs;
  for (std::size_t i = shuffled.size() - 1; i > 0; --i)
    std::swap(shuffled[i], shuffled[eng() % (i + 1)]);
  ExactLogSum scrambled;
  for (double x : shuffled) scrambled.add(x);

  CHECK(forward.value() == backward.value());
  CHECK(forward.value() == scrambled.value());
}

TEST_CASE("exact accumulator agrees with long double summation") {
  std::mt19937_64 eng(99);
  ExactLogSum acc;
  long double ref = 0.0L;
  double absum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    double x = (u - 0.5) * 2.0e3;
    acc.add(x);
    ref += x;
    absum += std::fabs(x);
  }
  CHECK(std::fabs(acc.value() - static_cast<double>(ref)) <= 1e-16 * absum + 1e-12);
}

TEST_CASE("bulk product helper matches the node path") {
  std::vector<double> values{0.5, 0.0, -2.0};
  std::vector<double> logabs(3), sgn(3);
  SignedLogProduct p = signed_log_product(values.data(), 3, logabs.data(), sgn.data());
  CHECK(p.zero_count == 1);
  CHECK(p.zero_index == 1);
  CHECK(p.sign == 0);
  // product of the nonzero factors is -1, so |.| has log 0
  CHECK(std::fabs(p.log_magnitude) < 1e-15);
  CHECK(sgn[0] == 1.0);
  CHECK(sgn[1] == 0.0);
  CHECK(sgn[2] == -1.0);
}
