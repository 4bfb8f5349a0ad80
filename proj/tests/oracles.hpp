#pragma once

// Test-side reference implementations, kept independent of the library code
// paths they check.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "scf/sss.hpp"

namespace scf::oracle {

// All codewords of the share code by direct enumeration of (message,
// randomizer) pairs; feasible for sigma <= 2 over small prime fields.
class CodewordTable {
 public:
  explicit CodewordTable(const SssParams& p) : p_(p) {
    Field f(p.field);
    uint32_t q = p.field.order();
    uint64_t count = 1;
    for (uint32_t i = 0; i < 2 * p.sigma; ++i) count *= q;
    words_.reserve(count);
    messages_.reserve(count);
    std::vector<uint32_t> idx(2 * p.sigma, 0);
    for (uint64_t n = 0; n < count; ++n) {
      Message m(p.sigma), s(p.sigma);
      uint64_t rem = n;
      for (uint32_t i = 0; i < p.sigma; ++i) {
        m[i] = Fe{static_cast<uint32_t>(rem % q)};
        rem /= q;
      }
      for (uint32_t i = 0; i < p.sigma; ++i) {
        s[i] = Fe{static_cast<uint32_t>(rem % q)};
        rem /= q;
      }
      words_.push_back(sss_share(p_, m, s));
      messages_.push_back(std::move(m));
    }
  }

  // Nearest codeword by linear scan; empty when nothing lies within radius.
  std::optional<DecodeResult> nearest(const ShareVector& noisy, uint32_t radius) const {
    std::optional<DecodeResult> best;
    for (size_t i = 0; i < words_.size(); ++i) {
      uint32_t d = static_cast<uint32_t>(hamming_distance(words_[i], noisy));
      if (d <= radius && (!best || d < best->distance)) {
        best = DecodeResult{words_[i], messages_[i], d};
        if (d == 0) break;
      }
    }
    return best;
  }

  size_t size() const { return words_.size(); }
  const ShareVector& word(size_t i) const { return words_[i]; }
  const Message& message(size_t i) const { return messages_[i]; }

 private:
  SssParams p_;
  std::vector<ShareVector> words_;
  std::vector<Message> messages_;
};

// Lexicographic enumeration of sigma-subsets of {1..Sigma}.
inline std::vector<std::vector<uint32_t>> all_subsets(uint32_t Sigma, uint32_t sigma) {
  std::vector<std::vector<uint32_t>> out;
  std::vector<uint32_t> cur(sigma);
  for (uint32_t i = 0; i < sigma; ++i) cur[i] = i + 1;
  while (true) {
    out.push_back(cur);
    // advance to the next combination
    int i = static_cast<int>(sigma) - 1;
    while (i >= 0 && cur[i] == Sigma - sigma + 1 + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (uint32_t j = static_cast<uint32_t>(i) + 1; j < sigma; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

// Multiplicative inverse in a prime field by exhaustive search.
inline uint32_t brute_force_inverse(uint32_t a, uint32_t p) {
  for (uint32_t x = 1; x < p; ++x)
    if ((static_cast<uint64_t>(a) * x) % p == 1) return x;
  return 0;
}

}  // namespace scf::oracle
