#include "glshap/kernel_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glshap/errors.hpp"
#include "glshap/kernels.hpp"
#include "glshap/parallel.hpp"

namespace glshap {
namespace {

constexpr std::size_t kChunkRows = 256;

void validate_instance(const std::vector<double>& x, std::size_t d) {
  if (x.size() != d)
    throw dimension_mismatch("instance has " + std::to_string(x.size()) +
                             " features, model expects " + std::to_string(d));
  for (double v : x)
    if (!std::isfinite(v)) throw invalid_input("instance contains a non-finite value");
}

// u_j = k_j(x_j, row_j) for one training row.
void factor_row(const ProductKernelModel& model, const std::vector<double>& x,
                std::size_t i, const std::vector<double>& inv2sq, std::vector<double>& u) {
  const std::size_t d = model.train.cols;
  const double* row = model.train.row(i);
  switch (model.kernel.family) {
    case KernelFamily::rbf:
      kernels::ops().rbf_row(x.data(), row, inv2sq.data(), d, u.data());
      return;
    case KernelFamily::laplace:
      for (std::size_t j = 0; j < d; ++j)
        u[j] = std::exp(-std::fabs(x[j] - row[j]) / model.kernel.lengthscales[j]);
      return;
    case KernelFamily::polynomial:
      for (std::size_t j = 0; j < d; ++j)
        u[j] = std::pow(x[j] * row[j] + model.kernel.offset, model.kernel.degree);
      return;
  }
}

}  // namespace

void validate_model(const ProductKernelModel& model) {
  if (model.train.rows == 0 || model.train.cols == 0)
    throw invalid_input("kernel model has empty training data");
  if (model.alpha.size() != model.train.rows)
    throw dimension_mismatch("alpha length " + std::to_string(model.alpha.size()) +
                             " does not match training rows " +
                             std::to_string(model.train.rows));
  if (model.train.data.size() != model.train.rows * model.train.cols)
    throw dimension_mismatch("training matrix storage does not match its shape");
  for (double v : model.train.data)
    if (!std::isfinite(v)) throw invalid_input("training data contains a non-finite value");
  for (double a : model.alpha)
    if (!std::isfinite(a)) throw invalid_input("alpha contains a non-finite value");
  if (!std::isfinite(model.intercept)) throw invalid_input("intercept is not finite");

  if (model.kernel.family == KernelFamily::polynomial) {
    if (model.kernel.degree < 1) throw invalid_input("polynomial degree must be >= 1");
    if (!std::isfinite(model.kernel.offset))
      throw invalid_input("polynomial offset is not finite");
  } else {
    if (model.kernel.lengthscales.size() != model.train.cols)
      throw dimension_mismatch("lengthscale count does not match feature count");
    for (double l : model.kernel.lengthscales)
      if (!(l > 0.0) || !std::isfinite(l))
        throw invalid_input("lengthscales must be positive and finite");
  }
}

double kernel_factor(const KernelSpec& spec, std::size_t j, double a, double b) {
  switch (spec.family) {
    case KernelFamily::rbf: {
      double l = spec.lengthscales.at(j);
      double d = a - b;
      return std::exp(-(d * d) / (2.0 * l * l));
    }
    case KernelFamily::laplace: {
      double l = spec.lengthscales.at(j);
      return std::exp(-std::fabs(a - b) / l);
    }
    case KernelFamily::polynomial:
      return std::pow(a * b + spec.offset, spec.degree);
  }
  return 0.0;
}

double kernel_value(const ProductKernelModel& model, const std::vector<double>& x,
                    const std::vector<char>& subset) {
  validate_model(model);
  validate_instance(x, model.train.cols);
  if (subset.size() != model.train.cols)
    throw dimension_mismatch("subset mask length does not match feature count");
  double acc = 0.0;
  for (std::size_t i = 0; i < model.train.rows; ++i) {
    double prod = 1.0;
    for (std::size_t j = 0; j < model.train.cols; ++j)
      if (subset[j]) prod *= kernel_factor(model.kernel, j, x[j], model.train.at(i, j));
    acc += model.alpha[i] * prod;
  }
  return acc;
}

KernelExplanation explain_kernel(const ProductKernelModel& model,
                                 const std::vector<double>& x, int budget, int threads) {
  validate_model(model);
  validate_instance(x, model.train.cols);
  const std::size_t n = model.train.rows;
  const std::size_t d = model.train.cols;
  auto rule = cached_rule(budget);

  std::vector<double> inv2sq;
  if (model.kernel.family == KernelFamily::rbf) {
    inv2sq.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      double l = model.kernel.lengthscales[j];
      inv2sq[j] = 1.0 / (2.0 * l * l);
    }
  }

  // Fixed chunking over training rows; each chunk accumulates its own
  // partial phi sequentially, so the result never depends on worker count.
  const std::size_t chunks = (n + kChunkRows - 1) / kChunkRows;
  std::vector<std::vector<double>> partials(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    detail::GameScratch scratch;
    scratch.acc.assign(d, 0.0);
    ProductGame game;
    game.factors.resize(d);
    std::size_t lo = c * kChunkRows;
    std::size_t hi = std::min(n, lo + kChunkRows);
    for (std::size_t i = lo; i < hi; ++i) {
      factor_row(model, x, i, inv2sq, game.factors);
      detail::accumulate_quadrature(game, *rule, model.alpha[i], scratch);
    }
    partials[c] = std::move(scratch.acc);
  });
  std::vector<double> phi = combine_partials(
      std::move(partials), [](std::vector<double> a, const std::vector<double>& b) {
        for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
        return a;
      });

  KernelExplanation out;
  out.attribution.phi = std::move(phi);
  out.attribution.budget = budget;
  out.attribution.exact = static_cast<std::size_t>(budget) >= (d + 1) / 2;
  double alpha_sum = 0.0;
  for (double a : model.alpha) alpha_sum += a;
  out.base_value = model.intercept + alpha_sum;
  return out;
}

Attribution kernel_bruteforce(const ProductKernelModel& model, const std::vector<double>& x) {
  validate_model(model);
  validate_instance(x, model.train.cols);
  const std::size_t d = model.train.cols;
  if (d > 25) throw budget_error("brute force supports at most 25 features");

  Attribution out;
  out.phi.assign(d, 0.0);
  out.exact = true;
  ProductGame game;
  game.factors.resize(d);
  for (std::size_t i = 0; i < model.train.rows; ++i) {
    for (std::size_t j = 0; j < d; ++j)
      game.factors[j] = kernel_factor(model.kernel, j, x[j], model.train.at(i, j));
    Attribution point = shapley_bruteforce(game);
    for (std::size_t j = 0; j < d; ++j) out.phi[j] += model.alpha[i] * point.phi[j];
  }
  return out;
}

double kernel_efficiency_gap(const ProductKernelModel& model, const std::vector<double>& x,
                             const std::vector<double>& phi) {
  const std::size_t d = model.train.cols;
  if (phi.size() != d) throw dimension_mismatch("phi length does not match feature count");
  std::vector<char> all(d, 1);
  std::vector<char> none(d, 0);
  double v_full = kernel_value(model, x, all);
  double v_empty = kernel_value(model, x, none);
  double s = 0.0, comp = 0.0;
  for (double v : phi) {
    double t = s + v;
    comp += (std::fabs(s) >= std::fabs(v)) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  double f = model.intercept + v_full;
  return std::fabs((s + comp) - (v_full - v_empty)) / std::max(1.0, std::fabs(f));
}

}  // namespace glshap
