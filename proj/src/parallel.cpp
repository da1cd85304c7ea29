#include "ncrpg/parallel.hpp"

#include <cstdlib>
#include <string>

namespace ncrpg {

namespace {

ExecPolicy initial_policy() {
  const char* env = std::getenv("NCRPG_THREADS");
  if (env != nullptr) {
    int n = std::atoi(env);
    if (n == 1) return ExecPolicy::Serial;
#if defined(_OPENMP)
    if (n > 1) omp_set_num_threads(n);
#endif
  }
#if defined(_OPENMP)
  return ExecPolicy::Parallel;
#else
  return ExecPolicy::Serial;
#endif
}

ExecPolicy g_policy = initial_policy();

}  // namespace

ExecPolicy default_exec_policy() { return g_policy; }

void set_exec_policy(ExecPolicy policy) { g_policy = policy; }

int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace ncrpg
