#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "scf/rng.hpp"

namespace scf {

enum class ExecMode { Serial, Parallel };

ExecMode parse_exec_mode(const std::string& s);

// Fan N independent seeded jobs out across workers. Per-job seeds are derived
// from the master seed by counter and results land at their own index, so the
// parallel kernel returns exactly what the serial reference loop returns, for
// any thread count. The serial path is the reference implementation; keep it
// intact for differential testing.
template <typename R>
std::vector<R> run_batch(uint64_t n, uint64_t master_seed, ExecMode mode,
                         const std::function<R(uint64_t index, uint64_t seed)>& job) {
  std::vector<R> results(n);
  if (mode == ExecMode::Serial) {
    for (uint64_t i = 0; i < n; ++i) results[i] = job(i, mix_seed(master_seed, i));
    return results;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
  for (int64_t i = 0; i < static_cast<int64_t>(n); ++i)
    results[i] = job(static_cast<uint64_t>(i), mix_seed(master_seed, static_cast<uint64_t>(i)));
#else
  for (uint64_t i = 0; i < n; ++i) results[i] = job(i, mix_seed(master_seed, i));
#endif
  return results;
}

// Histogram of job outputs (job returns a bin index < bins). Parallel path
// reduces thread-local histograms; identical totals to the serial path.
std::vector<uint64_t> run_batch_histogram(uint64_t n, uint64_t master_seed, ExecMode mode, size_t bins,
                                          const std::function<size_t(uint64_t, uint64_t)>& job);

}  // namespace scf
