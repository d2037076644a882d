#ifndef GLSHAP_KERNEL_MODEL_HPP
#define GLSHAP_KERNEL_MODEL_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "glshap/product_game.hpp"

namespace glshap {

// Dense row-major matrix, just enough for training data.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
};

enum class KernelFamily { rbf, laplace, polynomial };

// Per-dimension kernel description. rbf and laplace use lengthscales;
// polynomial uses (a*b + offset)^degree in every dimension.
struct KernelSpec {
  KernelFamily family = KernelFamily::rbf;
  std::vector<double> lengthscales;
  int degree = 2;
  double offset = 1.0;
};

// f(x) = intercept + sum_i alpha_i prod_j k_j(x_j, train_ij)
struct ProductKernelModel {
  std::vector<double> alpha;
  Matrix train;
  KernelSpec kernel;
  double intercept = 0.0;
};

struct KernelExplanation {
  Attribution attribution;
  // intercept + sum(alpha): the model output when no feature participates
  double base_value = 0.0;
};

// Validates shapes, lengthscale positivity, finiteness. Throws on problems.
void validate_model(const ProductKernelModel& model);

double kernel_factor(const KernelSpec& spec, std::size_t j, double a, double b);

// v_x(S) = sum_i alpha_i prod_{j in S} k_j(x_j, train_ij); subset given as
// a membership mask of length d. The empty subset yields sum(alpha).
double kernel_value(const ProductKernelModel& model, const std::vector<double>& x,
                    const std::vector<char>& subset);

// Attribution of f(x) - base_value. One product game per training point,
// combined linearly with the alpha weights under a shared rule. Cost is
// O(n d m); `threads` splits over training points in fixed 256-row chunks.
KernelExplanation explain_kernel(const ProductKernelModel& model,
                                 const std::vector<double>& x, int budget,
                                 int threads = 1);

// Exact values by subset enumeration over the aggregate game; d <= 25.
Attribution kernel_bruteforce(const ProductKernelModel& model, const std::vector<double>& x);

// |f(x) - base_value - sum(phi)| / max(1, |f(x)|)
double kernel_efficiency_gap(const ProductKernelModel& model, const std::vector<double>& x,
                             const std::vector<double>& phi);

}  // namespace glshap

#endif
