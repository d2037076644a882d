#ifndef GLSHAP_SIGNED_LOG_HPP
#define GLSHAP_SIGNED_LOG_HPP

#include <cstdint>
#include <cstdlib>

namespace glshap {

// A product held as sign and log-magnitude. Exact zero factors are counted
// instead of folded into the magnitude: log_magnitude is always the log of
// the product over the nonzero factors only, and sign is 0 whenever
// zero_count > 0. zero_index identifies the single zero factor when
// zero_count == 1 (it is -1 otherwise).
struct SignedLogProduct {
  double log_magnitude = 0.0;
  int sign = 1;
  int zero_count = 0;
  long zero_index = -1;
};

// Order-free accumulator for sums of doubles with |v| <= 2^18 or so.
// Addends are quantized onto a fixed 2^-96 grid and summed in a 128-bit
// integer, so the result is identical under any permutation or partition
// of the inputs (integer addition is associative). The quantization error
// is below 2^-96 per addend, far under double roundoff for the log
// magnitudes this accumulates.
class ExactLogSum {
 public:
  void add(double v) {
    // Split v = hi + r with hi on the 2^-35 grid, r exact, then quantize r
    // onto the 2^-96 grid. Both conversions are value-only: where an addend
    // sits in the input order cannot affect the total.
    double scaled = v * 0x1p35;
    std::int64_t vh = static_cast<std::int64_t>(scaled >= 0 ? scaled + 0.5 : scaled - 0.5);
    double r = v - static_cast<double>(vh) * 0x1p-35;
    std::int64_t lo = static_cast<std::int64_t>(r >= 0 ? r * 0x1p96 + 0.5 : r * 0x1p96 - 0.5);
    acc_ += (static_cast<__int128>(vh) << 61) + lo;
  }

  double value() const { return static_cast<double>(acc_) * 0x1p-96; }

  void reset() { acc_ = 0; }

 private:
  __int128 acc_ = 0;
};

// Folds values[0..n) into a SignedLogProduct, writing log|v| and sgn(v)
// into the caller's arrays as a side product for later leave-one-out use.
// The log magnitudes are summed with ExactLogSum, so the fold is invariant
// under any reordering of the values.
SignedLogProduct signed_log_product(const double* values, std::size_t n,
                                    double* logabs, double* sgn);

}  // namespace glshap

#endif
