#pragma once

#include <cstdint>

#include "scf/rng.hpp"
#include "scf/sss.hpp"

namespace scf {

// Binomial coefficient; throws if the value would not fit in 64 bits.
uint64_t binomial(uint32_t n, uint32_t k);

// Lexicographic rank of a sigma-subset of {1..Sigma} (rank 0 = {1..sigma}),
// and its inverse.
uint64_t subset_rank(const SubsetS& S, uint32_t Sigma);
SubsetS subset_unrank(uint64_t rank, uint32_t Sigma, uint32_t sigma);

// Number of coin bits a challenge flip consumes: ceil(log2 C(Sigma,sigma))
// plus 64 slack bits, which caps the residue bias at 2^-64.
size_t subset_coin_bits(uint32_t Sigma, uint32_t sigma);

// Interpret a coin string (little-endian bit order, exact length required) as
// a subset via modular reduction of its integer value.
SubsetS subset_from_coins(const Bytes& coins, uint32_t Sigma, uint32_t sigma);

// Uniformly random coin string mapping to S; inverse of subset_from_coins.
Bytes coins_for_subset(const SubsetS& S, uint32_t Sigma, uint32_t sigma, Rng& rng);

SubsetS random_subset(uint32_t Sigma, uint32_t sigma, Rng& rng);

}  // namespace scf
