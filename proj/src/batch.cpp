#include "scf/batch.hpp"

namespace scf {

ExecMode parse_exec_mode(const std::string& s) {
  if (s == "serial") return ExecMode::Serial;
  if (s == "parallel") return ExecMode::Parallel;
  throw std::invalid_argument("unknown exec mode: " + s);
}

std::vector<uint64_t> run_batch_histogram(uint64_t n, uint64_t master_seed, ExecMode mode, size_t bins,
                                          const std::function<size_t(uint64_t, uint64_t)>& job) {
  std::vector<uint64_t> hist(bins, 0);
  if (mode == ExecMode::Serial) {
    for (uint64_t i = 0; i < n; ++i) {
      size_t b = job(i, mix_seed(master_seed, i));
      hist.at(b)++;
    }
    return hist;
  }
#ifdef _OPENMP
#pragma omp parallel
  {
    std::vector<uint64_t> local(bins, 0);
#pragma omp for schedule(dynamic, 64)
    for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) {
      size_t b = job(static_cast<uint64_t>(i), mix_seed(master_seed, static_cast<uint64_t>(i)));
      local.at(b)++;
    }
#pragma omp critical
    for (size_t b = 0; b < bins; ++b) hist[b] += local[b];
  }
#else
  for (uint64_t i = 0; i < n; ++i) {
    size_t b = job(i, mix_seed(master_seed, i));
    hist.at(b)++;
  }
#endif
  return hist;
}

}  // namespace scf
