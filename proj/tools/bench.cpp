// Throughput comparison of the serial reference batch runner against the
// OpenMP kernel, on the session workloads the statistical suites lean on.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "scf/batch.hpp"
#include "scf/registry.hpp"

using namespace scf;

namespace {

double seconds_for(ExecMode mode, uint64_t n, const RunConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  volatile uint64_t sink = 0;
  auto outcomes = run_batch<uint8_t>(n, cfg.seed, mode, [&](uint64_t, uint64_t seed) {
    Transcript t = run_protocol_session(cfg, seed);
    return static_cast<uint8_t>(session_outcome(t).has_value() ? 1 : 0);
  });
  for (uint8_t o : outcomes) sink += o;
  (void)sink;
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

void bench_protocol(const char* label, const RunConfig& cfg, uint64_t n) {
  RunConfig c = cfg;
  c.n = n;
  double serial = seconds_for(ExecMode::Serial, n, c);
  double parallel = seconds_for(ExecMode::Parallel, n, c);
  std::printf("%-28s n=%-7llu serial %8.3fs (%9.0f/s)  parallel %8.3fs (%9.0f/s)  speedup %.2fx\n",
              label, static_cast<unsigned long long>(n), serial, n / serial, parallel, n / parallel,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  uint64_t scale = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20000;
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; parallel mode falls back to the serial loop\n");
#endif

  RunConfig fr;
  fr.protocol = "coin-fr";
  fr.ell = 8;
  fr.seed = 42;
  bench_protocol("coin-fr hybrid ell=8", fr, scale);

  RunConfig ff;
  ff.protocol = "coin-ff";
  ff.sigma = 1;
  ff.field_width = 8;
  ff.seed = 42;
  bench_protocol("coin-ff hybrid sigma=1", ff, scale);

  RunConfig ff8;
  ff8.protocol = "coin-ff";
  ff8.sigma = 8;
  ff8.field_width = 16;
  ff8.seed = 42;
  bench_protocol("coin-ff hybrid sigma=8", ff8, scale / 4);

  RunConfig frc = fr;
  frc.mode = RunMode::Composed;
  frc.ell = 8;
  bench_protocol("coin-fr composed (blum base)", frc, scale / 20);

  RunConfig zk;
  zk.protocol = "zkpk";
  zk.vertices = 4;
  zk.sigma = 10;
  zk.seed = 42;
  bench_protocol("zkpk hybrid v=4 sigma=10", zk, scale / 4);

  return 0;
}
