#pragma once

#include <cstdint>
#include <random>

#include "scf/bytes.hpp"

namespace scf {

// Seedable deterministic randomness source. mt19937_64 is fully specified by
// the standard, so transcripts replay bit-identically across platforms. The
// whole object is value-copyable, which is what makes party snapshots work.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, bound), bound > 0. Rejection sampling, no modulo bias.
  uint64_t uniform(uint64_t bound);

  bool bit() { return next_u64() & 1; }

  Bytes bytes(size_t n);

  // n uniform bits packed LSB-first, unused high bits zero.
  Bytes bits(size_t nbits);

  bool operator==(const Rng& o) const { return gen_ == o.gen_; }

 private:
  std::mt19937_64 gen_;
};

// splitmix64; used to derive independent per-session / per-party seeds from a
// master seed and a counter.
uint64_t mix_seed(uint64_t seed, uint64_t counter);

// Fold a byte string into a 64-bit seed (FNV-1a).
uint64_t seed_from_bytes(const Bytes& b);

}  // namespace scf
