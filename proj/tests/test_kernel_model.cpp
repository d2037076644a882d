#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "glshap/errors.hpp"
#include "glshap/kernel_model.hpp"
#include "glshap/synthetic.hpp"

using namespace glshap;

namespace {

ProductKernelModel tiny_rbf() {
  // two training points one unit apart in feature 0, lengthscale 1
  ProductKernelModel m;
  m.alpha = {1.0, 1.0};
  m.train.rows = 2;
  m.train.cols = 2;
  m.train.data = {0.0, 0.0, 1.0, 0.0};
  m.kernel.family = KernelFamily::rbf;
  m.kernel.lengthscales = {1.0, 1.0};
  return m;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::fabs(a[i] - b[i]) / std::max(1.0, std::fabs(b[i])));
  return worst;
}

}  // namespace

TEST_CASE("per-dimension kernel factors") {
  KernelSpec rbf{KernelFamily::rbf, {1.0}, 2, 1.0};
  CHECK(kernel_factor(rbf, 0, 0.0, 1.0) ==
        doctest::Approx(0.60653065971263342).epsilon(1e-15));
  CHECK(kernel_factor(rbf, 0, 0.7, 0.7) == 1.0);

  KernelSpec lap{KernelFamily::laplace, {0.5}, 2, 1.0};
  CHECK(kernel_factor(lap, 0, 0.0, 1.0) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-15));

  KernelSpec poly{KernelFamily::polynomial, {}, 2, 1.0};
  CHECK(kernel_factor(poly, 0, 1.0, 2.0) == 9.0);
}

TEST_CASE("subset values of the aggregate game") {
  ProductKernelModel m = tiny_rbf();
  std::vector<double> x{0.0, 0.0};

  CHECK(kernel_value(m, x, {0, 0}) == 2.0);  // empty subset: sum(alpha)
  CHECK(kernel_value(m, x, {1, 1}) ==
        doctest::Approx(1.0 + std::exp(-0.5)).epsilon(1e-15));
  CHECK(kernel_value(m, x, {0, 1}) == 2.0);  // feature 1 matches both rows

  CHECK_THROWS_AS(kernel_value(m, x, {1}), dimension_mismatch);
}

TEST_CASE("explaining a training point gives exact zeros") {
  ProductKernelModel m;
  m.alpha = {0.75};
  m.intercept = 0.25;
  m.train.rows = 1;
  m.train.cols = 3;
  m.train.data = {0.4, -1.2, 2.0};
  m.kernel.family = KernelFamily::rbf;
  m.kernel.lengthscales = {1.0, 0.5, 2.0};

  KernelExplanation e = explain_kernel(m, {0.4, -1.2, 2.0}, 2);
  CHECK(e.base_value == 1.0);
  CHECK(e.attribution.exact);
  CHECK(e.attribution.budget == 2);
  for (double v : e.attribution.phi) CHECK(v == 0.0);
}

TEST_CASE("zero coefficients contribute nothing") {
  ProductKernelModel m = tiny_rbf();
  m.alpha = {0.0, 0.0};
  KernelExplanation e = explain_kernel(m, {0.3, 0.9}, 1);
  for (double v : e.attribution.phi) CHECK(v == 0.0);
  CHECK(e.base_value == 0.0);
}

TEST_CASE("explanation matches brute force over 50 random models") {
  synthetic::Rng rng(20240118);
  const KernelFamily families[] = {KernelFamily::rbf, KernelFamily::laplace,
                                   KernelFamily::polynomial};
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + rng.uniform_int(19);
    int d = 1 + rng.uniform_int(10);
    ProductKernelModel m =
        synthetic::random_kernel_model(rng, n, d, families[trial % 3]);
    std::vector<double> x = synthetic::random_instance(rng, d);
    KernelExplanation e = explain_kernel(m, x, (d + 1) / 2);
    CHECK(e.attribution.exact);
    Attribution bf = kernel_bruteforce(m, x);
    worst = std::max(worst, max_rel_diff(e.attribution.phi, bf.phi));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("row chunking keeps the bits fixed across thread counts") {
  synthetic::Rng rng(5150);
  ProductKernelModel m = synthetic::random_kernel_model(rng, 1000, 30, KernelFamily::rbf);
  std::vector<double> x = synthetic::random_instance(rng, 30);
  KernelExplanation base = explain_kernel(m, x, 15, 1);
  for (int threads : {2, 4, 8}) {
    KernelExplanation e = explain_kernel(m, x, 15, threads);
    REQUIRE(e.attribution.phi.size() == base.attribution.phi.size());
    for (std::size_t j = 0; j < 30; ++j)
      CHECK(e.attribution.phi[j] == base.attribution.phi[j]);
  }
}

TEST_CASE("additivity closes at the exact budget") {
  synthetic::Rng rng(777);
  ProductKernelModel m = synthetic::random_kernel_model(rng, 50, 60, KernelFamily::rbf);
  std::vector<double> x = synthetic::random_instance(rng, 60);
  KernelExplanation e = explain_kernel(m, x, 30);
  CHECK(e.attribution.exact);
  CHECK(kernel_efficiency_gap(m, x, e.attribution.phi) <= 1e-10);

  // base + contributions reconstruct f(x)
  std::vector<char> all(60, 1);
  double fx = m.intercept + kernel_value(m, x, all);
  double s = e.base_value;
  for (double v : e.attribution.phi) s += v;
  CHECK(s == doctest::Approx(fx).epsilon(1e-10));
}

TEST_CASE("malformed models and instances are rejected") {
  ProductKernelModel m = tiny_rbf();
  std::vector<double> x{0.0, 0.0};

  ProductKernelModel bad = m;
  bad.alpha = {1.0};
  CHECK_THROWS_AS(explain_kernel(bad, x, 2), dimension_mismatch);

  bad = m;
  bad.kernel.lengthscales = {1.0};
  CHECK_THROWS_AS(explain_kernel(bad, x, 2), dimension_mismatch);

  bad = m;
  bad.kernel.lengthscales = {1.0, -0.5};
  CHECK_THROWS_AS(explain_kernel(bad, x, 2), invalid_input);

  bad = m;
  bad.kernel.lengthscales = {1.0, 0.0};
  CHECK_THROWS_AS(explain_kernel(bad, x, 2), invalid_input);

  bad = m;
  bad.train = {};
  CHECK_THROWS_AS(explain_kernel(bad, x, 2), invalid_input);

  bad = m;
  bad.train.data[1] = std::nan("");
  CHECK_THROWS_AS(explain_kernel(bad, x, 2), invalid_input);

  bad = m;
  bad.kernel.family = KernelFamily::polynomial;
  bad.kernel.degree = 0;
  CHECK_THROWS_AS(explain_kernel(bad, x, 2), invalid_input);

  CHECK_THROWS_AS(explain_kernel(m, {0.0}, 2), dimension_mismatch);
  CHECK_THROWS_AS(explain_kernel(m, {0.0, std::nan("")}, 2), invalid_input);
  CHECK_THROWS_AS(explain_kernel(m, x, 0), budget_error);

  synthetic::Rng rng(4);
  ProductKernelModel wide = synthetic::random_kernel_model(rng, 3, 26, KernelFamily::rbf);
  std::vector<double> wx = synthetic::random_instance(rng, 26);
  CHECK_THROWS_AS(kernel_bruteforce(wide, wx), budget_error);
}
