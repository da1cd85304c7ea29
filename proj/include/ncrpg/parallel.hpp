#pragma once

#include <cstdlib>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace ncrpg {

enum class ExecPolicy { Serial, Parallel };

// Global default policy; overridden by NCRPG_THREADS=1 or set_exec_policy.
ExecPolicy default_exec_policy();
void set_exec_policy(ExecPolicy policy);
int max_threads();

namespace detail {

// Fixed block partition of [0, n): block b covers [bounds[b], bounds[b+1]).
// Block count depends only on n, never on the thread count, so reductions
// that combine per-block partials in index order give bitwise-identical
// results for any number of threads.
inline std::vector<int> block_bounds(int n, int max_blocks = 128) {
  int nblocks = n < max_blocks ? (n > 0 ? n : 1) : max_blocks;
  std::vector<int> bounds(nblocks + 1);
  for (int b = 0; b <= nblocks; ++b)
    bounds[b] = static_cast<int>((static_cast<long long>(n) * b) / nblocks);
  return bounds;
}

}  // namespace detail

// Deterministic blocked reduction. Partial: default-constructible accumulator
// with member add via the BlockFn; Combine folds partials in block order.
//   BlockFn: void(int lo, int hi, Partial& acc)
//   CombineFn: void(Partial& total, const Partial& part)
template <class Partial, class BlockFn, class CombineFn>
Partial blocked_reduce(int n, ExecPolicy policy, BlockFn block_fn,
                       CombineFn combine_fn, Partial init) {
  std::vector<int> bounds = detail::block_bounds(n);
  int nblocks = static_cast<int>(bounds.size()) - 1;
  std::vector<Partial> parts(nblocks, init);
  if (policy == ExecPolicy::Parallel) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
    for (int b = 0; b < nblocks; ++b)
      block_fn(bounds[b], bounds[b + 1], parts[b]);
  } else {
    for (int b = 0; b < nblocks; ++b)
      block_fn(bounds[b], bounds[b + 1], parts[b]);
  }
  Partial total = init;
  for (int b = 0; b < nblocks; ++b) combine_fn(total, parts[b]);
  return total;
}

// Parallel map over independent indices (each index writes disjoint output).
template <class Fn>
void parallel_for(int n, ExecPolicy policy, Fn fn) {
  if (policy == ExecPolicy::Parallel) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n; ++i) fn(i);
  } else {
    for (int i = 0; i < n; ++i) fn(i);
  }
}

}  // namespace ncrpg
