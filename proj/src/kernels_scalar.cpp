#include <cmath>

#include "glshap/kernels.hpp"

namespace glshap::kernels {
namespace {

void affine_combine_scalar(double tau, const double* u, std::size_t n, double* t) {
  double omt = 1.0 - tau;
  for (std::size_t j = 0; j < n; ++j) t[j] = omt + tau * u[j];
}

void log_abs_sign_scalar(const double* x, std::size_t n, double* logabs, double* sgn) {
  for (std::size_t j = 0; j < n; ++j) {
    double v = x[j];
    logabs[j] = std::log(std::fabs(v));
    sgn[j] = (v > 0.0) ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
  }
}

void exp_vec_scalar(const double* x, std::size_t n, double* y) {
  for (std::size_t j = 0; j < n; ++j) y[j] = std::exp(x[j]);
}

void loo_accumulate_scalar(double* acc, const double* logabs, const double* sgn,
                           std::size_t n, double logp, double sp, double w) {
  double c = w * sp;
  for (std::size_t j = 0; j < n; ++j) acc[j] += c * sgn[j] * std::exp(logp - logabs[j]);
}

void rbf_row_scalar(const double* x, const double* row, const double* inv2sq,
                    std::size_t n, double* out) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = x[j] - row[j];
    out[j] = std::exp(-(d * d) * inv2sq[j]);
  }
}

void path_rescale_scalar(double* b, const double* tau, std::size_t m, double p,
                         double qn, double qo) {
  for (std::size_t r = 0; r < m; ++r) {
    double omt = 1.0 - tau[r];
    b[r] *= p * (omt + tau[r] * qn) / (omt + tau[r] * qo);
  }
}

double edge_gather_scalar(const double* w, const double* tau, const double* h,
                          double* ht, std::size_t m, double qn, double qo) {
  double acc = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    double omt = 1.0 - tau[r];
    double sn = (qn - 1.0) / (omt + tau[r] * qn);
    double so = (qo - 1.0) / (omt + tau[r] * qo);
    acc += w[r] * h[r] * (sn - so);
    ht[r] += h[r];
  }
  return acc;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      affine_combine_scalar, log_abs_sign_scalar, exp_vec_scalar,
      loo_accumulate_scalar, rbf_row_scalar,      path_rescale_scalar,
      edge_gather_scalar,    "scalar",
  };
  return ops;
}

}  // namespace glshap::kernels
