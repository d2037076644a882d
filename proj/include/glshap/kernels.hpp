#ifndef GLSHAP_KERNELS_HPP
#define GLSHAP_KERNELS_HPP

#include <cstddef>

namespace glshap::kernels {

// Data-parallel inner loops. Every entry point has a scalar reference
// implementation and may have a vectorized variant; one implementation is
// picked at startup (cpuid, overridable) and used for the whole process.
//
// All transforms are value-only: the result for element j depends on the
// input values alone, never on j or on the array length. That keeps
// attribution bit-stable under factor permutations.
struct Ops {
  // t[j] = (1-tau) + tau*u[j]
  void (*affine_combine)(double tau, const double* u, std::size_t n, double* t);

  // logabs[j] = log|x[j]| (-inf at zero), sgn[j] = -1.0 / 0.0 / +1.0
  void (*log_abs_sign)(const double* x, std::size_t n, double* logabs, double* sgn);

  // y[j] = exp(x[j]), saturating to 0 / +inf outside the finite range
  void (*exp_vec)(const double* x, std::size_t n, double* y);

  // acc[j] += w * sp * sgn[j] * exp(logp - logabs[j])
  // (leave-one-out recombination for a zero-free node)
  void (*loo_accumulate)(double* acc, const double* logabs, const double* sgn,
                         std::size_t n, double logp, double sp, double w);

  // out[j] = exp(-(x[j]-row[j])^2 * inv2sq[j])
  void (*rbf_row)(const double* x, const double* row, const double* inv2sq,
                  std::size_t n, double* out);

  // b[r] *= p * ((1-tau[r]) + tau[r]*qn) / ((1-tau[r]) + tau[r]*qo)
  void (*path_rescale)(double* b, const double* tau, std::size_t m, double p,
                       double qn, double qo);

  // ht[r] += h[r]; returns sum_r w[r] * h[r] * (s(qn,r) - s(qo,r))
  // where s(q,r) = (q-1) / ((1-tau[r]) + tau[r]*q)
  double (*edge_gather)(const double* w, const double* tau, const double* h,
                        double* ht, std::size_t m, double qn, double qo);

  const char* name;
};

enum class Backend { scalar, avx2 };

// The active implementation. Resolved once: GLSHAP_KERNEL=scalar|avx2 in the
// environment wins, otherwise the best instruction set the CPU supports.
const Ops& ops();

// Test hook; throws invalid_input if the backend is unavailable on this host.
void force_backend(Backend b);

Backend active_backend();
const char* backend_name();
bool avx2_available();

// Reference implementation, always present.
const Ops& scalar_ops();

}  // namespace glshap::kernels

#endif
