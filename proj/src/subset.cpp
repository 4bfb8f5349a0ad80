#include "scf/subset.hpp"

namespace scf {

using u128 = unsigned __int128;

uint64_t binomial(uint32_t n, uint32_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  u128 r = 1;
  for (uint32_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > static_cast<u128>(UINT64_MAX)) throw std::overflow_error("binomial: exceeds 64 bits");
  }
  return static_cast<uint64_t>(r);
}

uint64_t subset_rank(const SubsetS& S, uint32_t Sigma) {
  uint64_t rank = 0;
  uint32_t k = static_cast<uint32_t>(S.positions.size());
  uint32_t prev = 0;
  for (uint32_t slot = 0; slot < k; ++slot) {
    uint32_t chosen = S.positions[slot];
    for (uint32_t a = prev + 1; a < chosen; ++a) rank += binomial(Sigma - a, k - slot - 1);
    prev = chosen;
  }
  return rank;
}

SubsetS subset_unrank(uint64_t rank, uint32_t Sigma, uint32_t sigma) {
  if (rank >= binomial(Sigma, sigma)) throw std::out_of_range("subset_unrank: rank");
  SubsetS S;
  S.positions.reserve(sigma);
  uint32_t a = 1;
  for (uint32_t slot = 0; slot < sigma; ++slot) {
    for (;; ++a) {
      uint64_t block = binomial(Sigma - a, sigma - slot - 1);
      if (rank < block) {
        S.positions.push_back(a);
        ++a;
        break;
      }
      rank -= block;
    }
  }
  return S;
}

static uint32_t bits_for(uint64_t v) {
  uint32_t b = 0;
  while ((u128{1} << b) < v) ++b;
  return b;
}

size_t subset_coin_bits(uint32_t Sigma, uint32_t sigma) {
  return bits_for(binomial(Sigma, sigma)) + 64;
}

static uint64_t coins_mod(const Bytes& coins, uint64_t modulus) {
  // bytes are little-endian, so fold from the most significant end
  u128 r = 0;
  for (size_t i = coins.size(); i-- > 0;) r = (r * 256 + coins[i]) % modulus;
  return static_cast<uint64_t>(r);
}

SubsetS subset_from_coins(const Bytes& coins, uint32_t Sigma, uint32_t sigma) {
  size_t nbits = subset_coin_bits(Sigma, sigma);
  if (coins.size() != bytes_for_bits(nbits)) throw std::invalid_argument("subset_from_coins: coin length");
  uint64_t c = binomial(Sigma, sigma);
  return subset_unrank(coins_mod(coins, c), Sigma, sigma);
}

Bytes coins_for_subset(const SubsetS& S, uint32_t Sigma, uint32_t sigma, Rng& rng) {
  size_t nbits = subset_coin_bits(Sigma, sigma);
  uint64_t c = binomial(Sigma, sigma);
  uint64_t rank = subset_rank(S, Sigma);
  // values v in [0, 2^nbits) with v = rank (mod c)
  u128 space = u128{1} << nbits;
  u128 count = (space - 1 - rank) / c + 1;
  u128 draw = (u128{rng.next_u64()} << 64) | rng.next_u64();
  u128 v = rank + (draw % count) * c;
  Bytes out(bytes_for_bits(nbits));
  for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<uint8_t>(v >> (8 * i));
  return out;
}

SubsetS random_subset(uint32_t Sigma, uint32_t sigma, Rng& rng) {
  return subset_unrank(rng.uniform(binomial(Sigma, sigma)), Sigma, sigma);
}

}  // namespace scf
