#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scf {

using Bytes = std::vector<uint8_t>;

// A party's local output. Empty optional is the abort symbol.
using Outcome = std::optional<Bytes>;

inline bool is_abort(const Outcome& o) { return !o.has_value(); }

std::string to_hex(const Bytes& b);
Bytes from_hex(const std::string& s);

// XOR of equal-length byte strings.
Bytes xor_bytes(const Bytes& a, const Bytes& b);

inline size_t bytes_for_bits(size_t nbits) { return (nbits + 7) / 8; }

// Zero the unused high bits of the last byte so an nbits-string has a
// canonical byte representation.
void mask_to_bits(Bytes& b, size_t nbits);

bool get_bit(const Bytes& b, size_t i);
void set_bit(Bytes& b, size_t i, bool v);

// First nbits of b as a canonical nbits-string.
Bytes truncate_bits(const Bytes& b, size_t nbits);

void put_u32(Bytes& out, uint32_t v);
uint32_t read_u32(const Bytes& in, size_t& pos);
void put_u64(Bytes& out, uint64_t v);
uint64_t read_u64(const Bytes& in, size_t& pos);

// Length-prefixed chunk (u32 LE + payload).
void put_chunk(Bytes& out, const Bytes& chunk);
Bytes read_chunk(const Bytes& in, size_t& pos);

inline void append(Bytes& out, const Bytes& more) {
  out.insert(out.end(), more.begin(), more.end());
}

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace scf
