#include "scf/rng.hpp"

namespace scf {

uint64_t Rng::uniform(uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::uniform: zero bound");
  if ((bound & (bound - 1)) == 0) return next_u64() & (bound - 1);
  uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % bound;
}

Bytes Rng::bytes(size_t n) {
  Bytes out(n);
  size_t i = 0;
  while (i + 8 <= n) {
    uint64_t v = next_u64();
    for (int k = 0; k < 8; ++k) out[i + k] = static_cast<uint8_t>(v >> (8 * k));
    i += 8;
  }
  if (i < n) {
    uint64_t v = next_u64();
    for (; i < n; ++i, v >>= 8) out[i] = static_cast<uint8_t>(v);
  }
  return out;
}

Bytes Rng::bits(size_t nbits) {
  Bytes out = bytes(bytes_for_bits(nbits));
  mask_to_bits(out, nbits);
  return out;
}

uint64_t mix_seed(uint64_t seed, uint64_t counter) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t seed_from_bytes(const Bytes& b) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (uint8_t c : b) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace scf
