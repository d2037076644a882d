#ifndef GLSHAP_SYNTHETIC_HPP
#define GLSHAP_SYNTHETIC_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "glshap/kernel_model.hpp"
#include "glshap/product_game.hpp"
#include "glshap/tree_model.hpp"

namespace glshap {
namespace synthetic {

// mt19937_64 with hand-rolled variate mappings. The engine's output is
// specified exactly by the standard, and the mappings below avoid
// std::*_distribution, whose streams differ between library vendors; the
// same seed therefore reproduces bit-identical models everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // {0, ..., n-1}
  int uniform_int(int n) {
    int k = static_cast<int>(uniform() * n);
    return k >= n ? n - 1 : k;
  }

  bool bernoulli(double p) { return uniform() < p; }

  double normal();

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

ProductGame random_game(Rng& rng, int dimension, double lo, double hi);

// Grows a binary tree by repeatedly splitting a random expandable leaf
// until leaf_target leaves exist or every leaf sits at max_depth.
// Split fractions ~ U(0.1, 0.9), leaf values ~ U(-10, 10),
// thresholds ~ U(-2, 2), features uniform over {0..feature_count-1}.
TreeModel random_tree(Rng& rng, int feature_count, int max_depth, int leaf_target);

TreeEnsemble random_ensemble(Rng& rng, int feature_count, int n_trees, int max_depth,
                             int leaves_per_tree);

Matrix random_matrix(Rng& rng, int rows, int cols);  // N(0,1) entries

// alpha ~ N(0,1), train ~ N(0,1), lengthscales ~ U(ls_lo, ls_hi).
ProductKernelModel random_kernel_model(Rng& rng, int n, int d, KernelFamily family,
                                       double ls_lo = 0.3, double ls_hi = 3.0);

std::vector<double> random_instance(Rng& rng, int d);  // N(0,1) entries

}  // namespace synthetic
}  // namespace glshap

#endif
