// AVX2 + FMA variants of the hot loops. Compiled only on x86-64; selected at
// runtime when the CPU supports both feature flags.
//
// log and exp are evaluated with the classic Cephes double-precision
// polynomial schemes (~1-2 ulp on the reduced interval), vectorized four
// lanes wide. Tail elements go through the same instruction sequence via
// masked loads/stores, so a value produces identical bits no matter where
// it sits in the array.

#ifdef GLSHAP_HAVE_AVX2

#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "glshap/kernels.hpp"

namespace glshap::kernels {
namespace {

const __m256i kTailMask[4] = {
    _mm256_setr_epi64x(0, 0, 0, 0),
    _mm256_setr_epi64x(-1, 0, 0, 0),
    _mm256_setr_epi64x(-1, -1, 0, 0),
    _mm256_setr_epi64x(-1, -1, -1, 0),
};

inline __m256d abs_pd(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

// small-integer epi64 -> pd (valid for |v| < 2^51)
inline __m256d epi64_to_pd(__m256i v) {
  __m256i magic = _mm256_set1_epi64x(0x4338000000000000LL);  // 2^52 + 2^51
  __m256d shifted = _mm256_castsi256_pd(_mm256_add_epi64(v, magic));
  return _mm256_sub_pd(shifted, _mm256_castsi256_pd(magic));
}

// ---- exp ----------------------------------------------------------------

inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);

  // k = floor(log2(e) x + 1/2), clamped so the 2^k construction below stays
  // inside the valid exponent field; saturation masks fix up the result.
  __m256d k = _mm256_floor_pd(_mm256_fmadd_pd(x, log2e, half));
  k = _mm256_max_pd(k, _mm256_set1_pd(-1200.0));
  k = _mm256_min_pd(k, _mm256_set1_pd(1100.0));

  __m256d r = _mm256_fnmadd_pd(k, c1, x);
  r = _mm256_fnmadd_pd(k, c2, r);

  __m256d rr = _mm256_mul_pd(r, r);
  __m256d px = _mm256_fmadd_pd(p0, rr, p1);
  px = _mm256_fmadd_pd(px, rr, p2);
  px = _mm256_mul_pd(px, r);
  __m256d qx = _mm256_fmadd_pd(q0, rr, q1);
  qx = _mm256_fmadd_pd(qx, rr, q2);
  qx = _mm256_fmadd_pd(qx, rr, q3);
  __m256d e = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  e = _mm256_fmadd_pd(e, _mm256_set1_pd(2.0), one);

  // scale by 2^k in two halves so denormal results underflow gradually
  __m256d k1 = _mm256_floor_pd(_mm256_mul_pd(k, half));
  __m256d k2 = _mm256_sub_pd(k, k1);
  __m256i bias = _mm256_set1_epi64x(1023);
  __m256i i1 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(k1));
  __m256i i2 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(k2));
  __m256d s1 = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(i1, bias), 52));
  __m256d s2 = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(i2, bias), 52));
  e = _mm256_mul_pd(_mm256_mul_pd(e, s1), s2);

  // exp(709.78271289338397) is still finite; only strictly larger inputs overflow
  __m256d big = _mm256_cmp_pd(x, _mm256_set1_pd(709.78271289338397), _CMP_GT_OQ);
  __m256d tiny = _mm256_cmp_pd(x, _mm256_set1_pd(-745.2), _CMP_LE_OQ);
  e = _mm256_blendv_pd(e, _mm256_set1_pd(HUGE_VAL), big);
  e = _mm256_blendv_pd(e, _mm256_setzero_pd(), tiny);
  return e;
}

// ---- log ----------------------------------------------------------------

inline __m256d log_abs_pd(__m256d v) {
  const __m256d sqrth = _mm256_set1_pd(0.70710678118654752440);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d p0 = _mm256_set1_pd(1.01875663804580931796e-4);
  const __m256d p1 = _mm256_set1_pd(4.97494994976747001425e-1);
  const __m256d p2 = _mm256_set1_pd(4.70579119878881725854e0);
  const __m256d p3 = _mm256_set1_pd(1.44989225341610930846e1);
  const __m256d p4 = _mm256_set1_pd(1.79368678507819816313e1);
  const __m256d p5 = _mm256_set1_pd(7.70838733755885391666e0);
  const __m256d q0 = _mm256_set1_pd(1.12873587189167450590e1);
  const __m256d q1 = _mm256_set1_pd(4.52279145837532221105e1);
  const __m256d q2 = _mm256_set1_pd(8.29875266912776603211e1);
  const __m256d q3 = _mm256_set1_pd(7.11544750618563894466e1);
  const __m256d q4 = _mm256_set1_pd(2.31251620126765340583e1);

  __m256d y = abs_pd(v);

  // scale denormals up so the exponent extraction below is valid
  __m256d is_tiny = _mm256_cmp_pd(y, _mm256_set1_pd(2.2250738585072014e-308), _CMP_LT_OQ);
  __m256d y_scaled = _mm256_mul_pd(y, _mm256_set1_pd(0x1p54));
  y = _mm256_blendv_pd(y, y_scaled, is_tiny);
  __m256d ebias = _mm256_and_pd(is_tiny, _mm256_set1_pd(-54.0));

  // frexp: m in [1/2, 1), e the binary exponent
  __m256i bits = _mm256_castpd_si256(y);
  __m256i eraw = _mm256_srli_epi64(bits, 52);
  __m256d e = _mm256_add_pd(_mm256_sub_pd(epi64_to_pd(eraw), _mm256_set1_pd(1022.0)), ebias);
  __m256i mbits = _mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
      _mm256_set1_epi64x(0x3FE0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mbits);

  __m256d low = _mm256_cmp_pd(m, sqrth, _CMP_LT_OQ);
  // m < sqrt(1/2): use 2m-1 and drop e by one; otherwise m-1
  __m256d x = _mm256_blendv_pd(_mm256_sub_pd(m, one),
                               _mm256_fmsub_pd(m, _mm256_set1_pd(2.0), one), low);
  e = _mm256_add_pd(e, _mm256_and_pd(low, _mm256_set1_pd(-1.0)));

  __m256d z = _mm256_mul_pd(x, x);
  __m256d pn = _mm256_fmadd_pd(p0, x, p1);
  pn = _mm256_fmadd_pd(pn, x, p2);
  pn = _mm256_fmadd_pd(pn, x, p3);
  pn = _mm256_fmadd_pd(pn, x, p4);
  pn = _mm256_fmadd_pd(pn, x, p5);
  __m256d qn = _mm256_add_pd(x, q0);
  qn = _mm256_fmadd_pd(qn, x, q1);
  qn = _mm256_fmadd_pd(qn, x, q2);
  qn = _mm256_fmadd_pd(qn, x, q3);
  qn = _mm256_fmadd_pd(qn, x, q4);

  __m256d w = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(x, z), pn), qn);
  w = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), w);
  w = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, w);
  __m256d res = _mm256_add_pd(x, w);
  res = _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), res);

  // |v| == 0 -> -inf; |v| == +inf -> +inf
  __m256d zero_mask = _mm256_cmp_pd(_mm256_andnot_pd(_mm256_set1_pd(-0.0), v),
                                    _mm256_setzero_pd(), _CMP_EQ_OQ);
  __m256d inf_mask = _mm256_cmp_pd(abs_pd(v), _mm256_set1_pd(HUGE_VAL), _CMP_EQ_OQ);
  res = _mm256_blendv_pd(res, _mm256_set1_pd(-HUGE_VAL), zero_mask);
  res = _mm256_blendv_pd(res, _mm256_set1_pd(HUGE_VAL), inf_mask);
  return res;
}

inline __m256d sign_pd(__m256d v) {
  __m256d pos = _mm256_and_pd(_mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_GT_OQ),
                              _mm256_set1_pd(1.0));
  __m256d neg = _mm256_and_pd(_mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_LT_OQ),
                              _mm256_set1_pd(-1.0));
  return _mm256_or_pd(pos, neg);
}

// ---- entry points -------------------------------------------------------

void affine_combine_avx2(double tau, const double* u, std::size_t n, double* t) {
  __m256d vt = _mm256_set1_pd(tau);
  __m256d vomt = _mm256_set1_pd(1.0 - tau);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4)
    _mm256_storeu_pd(t + j, _mm256_fmadd_pd(vt, _mm256_loadu_pd(u + j), vomt));
  if (j < n) {
    __m256i mask = kTailMask[n - j];
    __m256d uv = _mm256_maskload_pd(u + j, mask);
    _mm256_maskstore_pd(t + j, mask, _mm256_fmadd_pd(vt, uv, vomt));
  }
}

void log_abs_sign_avx2(const double* x, std::size_t n, double* logabs, double* sgn) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d v = _mm256_loadu_pd(x + j);
    _mm256_storeu_pd(logabs + j, log_abs_pd(v));
    _mm256_storeu_pd(sgn + j, sign_pd(v));
  }
  if (j < n) {
    __m256i mask = kTailMask[n - j];
    __m256d v = _mm256_maskload_pd(x + j, mask);
    _mm256_maskstore_pd(logabs + j, mask, log_abs_pd(v));
    _mm256_maskstore_pd(sgn + j, mask, sign_pd(v));
  }
}

void exp_vec_avx2(const double* x, std::size_t n, double* y) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) _mm256_storeu_pd(y + j, exp_pd(_mm256_loadu_pd(x + j)));
  if (j < n) {
    __m256i mask = kTailMask[n - j];
    _mm256_maskstore_pd(y + j, mask, exp_pd(_mm256_maskload_pd(x + j, mask)));
  }
}

void loo_accumulate_avx2(double* acc, const double* logabs, const double* sgn,
                         std::size_t n, double logp, double sp, double w) {
  __m256d vlogp = _mm256_set1_pd(logp);
  __m256d vc = _mm256_set1_pd(w * sp);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d ex = exp_pd(_mm256_sub_pd(vlogp, _mm256_loadu_pd(logabs + j)));
    __m256d term = _mm256_mul_pd(_mm256_mul_pd(vc, _mm256_loadu_pd(sgn + j)), ex);
    _mm256_storeu_pd(acc + j, _mm256_add_pd(_mm256_loadu_pd(acc + j), term));
  }
  if (j < n) {
    __m256i mask = kTailMask[n - j];
    __m256d ex = exp_pd(_mm256_sub_pd(vlogp, _mm256_maskload_pd(logabs + j, mask)));
    __m256d term = _mm256_mul_pd(_mm256_mul_pd(vc, _mm256_maskload_pd(sgn + j, mask)), ex);
    _mm256_maskstore_pd(acc + j, mask,
                        _mm256_add_pd(_mm256_maskload_pd(acc + j, mask), term));
  }
}

void rbf_row_avx2(const double* x, const double* row, const double* inv2sq,
                  std::size_t n, double* out) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + j), _mm256_loadu_pd(row + j));
    __m256d arg = _mm256_mul_pd(_mm256_mul_pd(d, d), _mm256_loadu_pd(inv2sq + j));
    _mm256_storeu_pd(out + j, exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), arg)));
  }
  if (j < n) {
    __m256i mask = kTailMask[n - j];
    __m256d d = _mm256_sub_pd(_mm256_maskload_pd(x + j, mask),
                              _mm256_maskload_pd(row + j, mask));
    __m256d arg = _mm256_mul_pd(_mm256_mul_pd(d, d), _mm256_maskload_pd(inv2sq + j, mask));
    _mm256_maskstore_pd(out + j, mask, exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), arg)));
  }
}

void path_rescale_avx2(double* b, const double* tau, std::size_t m, double p,
                       double qn, double qo) {
  __m256d vp = _mm256_set1_pd(p);
  __m256d vqn = _mm256_set1_pd(qn);
  __m256d vqo = _mm256_set1_pd(qo);
  __m256d one = _mm256_set1_pd(1.0);
  std::size_t r = 0;
  for (; r + 4 <= m; r += 4) {
    __m256d t = _mm256_loadu_pd(tau + r);
    __m256d omt = _mm256_sub_pd(one, t);
    __m256d an = _mm256_fmadd_pd(t, vqn, omt);
    __m256d ao = _mm256_fmadd_pd(t, vqo, omt);
    __m256d scale = _mm256_div_pd(_mm256_mul_pd(vp, an), ao);
    _mm256_storeu_pd(b + r, _mm256_mul_pd(_mm256_loadu_pd(b + r), scale));
  }
  if (r < m) {
    __m256i mask = kTailMask[m - r];
    __m256d t = _mm256_maskload_pd(tau + r, mask);
    __m256d omt = _mm256_sub_pd(one, t);
    __m256d an = _mm256_fmadd_pd(t, vqn, omt);
    __m256d ao = _mm256_fmadd_pd(t, vqo, omt);
    __m256d scale = _mm256_div_pd(_mm256_mul_pd(vp, an), ao);
    _mm256_maskstore_pd(b + r, mask,
                        _mm256_mul_pd(_mm256_maskload_pd(b + r, mask), scale));
  }
}

double edge_gather_avx2(const double* w, const double* tau, const double* h,
                        double* ht, std::size_t m, double qn, double qo) {
  __m256d vqn = _mm256_set1_pd(qn);
  __m256d vqo = _mm256_set1_pd(qo);
  __m256d qn1 = _mm256_set1_pd(qn - 1.0);
  __m256d qo1 = _mm256_set1_pd(qo - 1.0);
  __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t r = 0;
  for (; r + 4 <= m; r += 4) {
    __m256d t = _mm256_loadu_pd(tau + r);
    __m256d omt = _mm256_sub_pd(one, t);
    __m256d sn = _mm256_div_pd(qn1, _mm256_fmadd_pd(t, vqn, omt));
    __m256d so = _mm256_div_pd(qo1, _mm256_fmadd_pd(t, vqo, omt));
    __m256d hv = _mm256_loadu_pd(h + r);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + r), hv),
                          _mm256_sub_pd(sn, so), acc);
    _mm256_storeu_pd(ht + r, _mm256_add_pd(_mm256_loadu_pd(ht + r), hv));
  }
  if (r < m) {
    __m256i mask = kTailMask[m - r];
    __m256d t = _mm256_maskload_pd(tau + r, mask);
    __m256d omt = _mm256_sub_pd(one, t);
    __m256d sn = _mm256_div_pd(qn1, _mm256_fmadd_pd(t, vqn, omt));
    __m256d so = _mm256_div_pd(qo1, _mm256_fmadd_pd(t, vqo, omt));
    __m256d hv = _mm256_maskload_pd(h + r, mask);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_maskload_pd(w + r, mask), hv),
                          _mm256_sub_pd(sn, so), acc);
    _mm256_maskstore_pd(ht + r, mask,
                        _mm256_add_pd(_mm256_maskload_pd(ht + r, mask), hv));
  }
  // fixed-order horizontal sum: (l0+l1) + (l2+l3)
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d pair = _mm_add_pd(lo, hi);  // {l0+l2, l1+l3}
  return _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops = {
      affine_combine_avx2, log_abs_sign_avx2, exp_vec_avx2, loo_accumulate_avx2,
      rbf_row_avx2,        path_rescale_avx2, edge_gather_avx2, "avx2",
  };
  return ops;
}

}  // namespace glshap::kernels

#endif  // GLSHAP_HAVE_AVX2
