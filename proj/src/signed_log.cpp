#include "glshap/signed_log.hpp"

#include "glshap/kernels.hpp"

namespace glshap {

SignedLogProduct signed_log_product(const double* values, std::size_t n,
                                    double* logabs, double* sgn) {
  kernels::ops().log_abs_sign(values, n, logabs, sgn);

  SignedLogProduct out;
  ExactLogSum sum;
  int neg = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (sgn[j] == 0.0) {
      out.zero_count += 1;
      out.zero_index = (out.zero_count == 1) ? static_cast<long>(j) : -1;
    } else {
      sum.add(logabs[j]);
      if (sgn[j] < 0.0) neg ^= 1;
    }
  }
  out.log_magnitude = sum.value();
  out.sign = (out.zero_count > 0) ? 0 : (neg ? -1 : 1);
  return out;
}

}  // namespace glshap
