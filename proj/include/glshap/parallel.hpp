#ifndef GLSHAP_PARALLEL_HPP
#define GLSHAP_PARALLEL_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace glshap {

// How a length-n reduction is carved up. The shape is a function of the
// length alone: fixed 4096-element chunks, sequential accumulation inside a
// chunk, then a balanced binary combine over the chunk results. Workers only
// decide who computes which chunk, never the combine order, so the result is
// bit-identical for any worker count.
struct ReductionPlan {
  std::size_t length = 0;
  std::size_t chunk = 4096;
  std::size_t chunk_count() const { return length == 0 ? 0 : (length + chunk - 1) / chunk; }
};

ReductionPlan make_plan(std::size_t length);

// Runs fn(i) for i in [0, count) on `threads` workers. fn must only touch
// slot i of any shared output. threads <= 1 runs inline.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

// Folds pre-computed chunk partials with the plan's balanced binary tree.
// Index pairing depends only on the partial count.
template <typename T, typename Op>
T combine_partials(std::vector<T> partials, Op op) {
  std::size_t n = partials.size();
  while (n > 1) {
    std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i)
      partials[i] = op(partials[2 * i], partials[2 * i + 1]);
    if (n % 2 == 1) {
      partials[half] = partials[n - 1];
      n = half + 1;
    } else {
      n = half;
    }
  }
  return partials[0];
}

// values[0..plan.length) reduced under op with identity `init`.
// Total applications of op: length - 1 (plus one fold of init when the
// input is empty).
template <typename T, typename Op>
T reduce(const T* values, const ReductionPlan& plan, T init, Op op, int threads = 1) {
  std::size_t chunks = plan.chunk_count();
  if (chunks == 0) return init;
  std::vector<T> partials(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::size_t lo = c * plan.chunk;
    std::size_t hi = lo + plan.chunk < plan.length ? lo + plan.chunk : plan.length;
    T acc = values[lo];
    for (std::size_t i = lo + 1; i < hi; ++i) acc = op(acc, values[i]);
    partials[c] = acc;
  });
  return combine_partials(std::move(partials), op);
}

// Effective worker count: the GLSHAP_THREADS environment variable wins,
// then the requested value; 0 means one worker per hardware thread.
int resolve_threads(int requested);

}  // namespace glshap

#endif
