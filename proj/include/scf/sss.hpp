#pragma once

#include <optional>
#include <vector>

#include "scf/field.hpp"

namespace scf {

// Reed-Solomon style sharing: a message m in F^sigma and a randomizer s in
// F^sigma fix a unique polynomial of degree <= 2*sigma-1; the share vector is
// its value at Sigma = 4*sigma distinct points. Any two sharings of distinct
// messages disagree in at least 2*sigma positions, and any sigma shares of a
// fresh sharing are uniform.
struct SssParams {
  uint32_t sigma = 0;
  uint32_t Sigma = 0;  // always 4*sigma
  FieldSpec field;

  SssParams(uint32_t sigma_, FieldSpec field_);

  // Evaluation point for logical index j in {-sigma+1, ..., Sigma}: the field
  // element with integer representative j + sigma. Signed indices have no
  // native meaning in characteristic 2, so the map is by representative.
  Fe point(int64_t j) const;
  Fe message_point(uint32_t i) const { return point(1 - static_cast<int64_t>(i)); }  // i in 1..sigma
  Fe share_point(uint32_t i) const { return point(i); }                              // i in 1..Sigma

  bool operator==(const SssParams&) const = default;
};

using ShareVector = std::vector<Fe>;  // length Sigma, position i-1 holds the value at share_point(i)
using Message = std::vector<Fe>;      // length sigma

// Sorted sigma-element subset of {1..Sigma}.
struct SubsetS {
  std::vector<uint32_t> positions;

  void validate(const SssParams& p) const;
  bool contains(uint32_t pos) const;
};

ShareVector sss_share(const SssParams& p, const Message& m, const Message& s);

// True iff all Sigma points lie on one polynomial of degree <= 2*sigma-1.
bool sss_consistent(const SssParams& p, const ShareVector& v);

// Message encoded by a consistent share vector. Throws on inconsistent input.
Message sss_reconstruct(const SssParams& p, const ShareVector& v);

struct DecodeResult {
  ShareVector codeword;
  Message message;
  uint32_t distance = 0;
};

// Nearest consistent share vector within Hamming distance sigma
// (Berlekamp-Welch). Empty optional when no codeword is that close.
std::optional<DecodeResult> sss_nearest_codeword(const SssParams& p, const ShareVector& noisy);

// Coordinates of v at the subset's positions, in position order.
Message sss_restrict(const ShareVector& v, const SubsetS& S, const SssParams& p);

size_t hamming_distance(const ShareVector& a, const ShareVector& b);

Message random_message(const SssParams& p, Rng& rng);

Bytes serialize_shares(const Field& f, const std::vector<Fe>& v);
std::vector<Fe> deserialize_shares(const Field& f, const Bytes& b, size_t count);

}  // namespace scf
