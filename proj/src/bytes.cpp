#include "scf/bytes.hpp"

namespace scf {

static const char* kHexDigits = "0123456789abcdef";

std::string to_hex(const Bytes& b) {
  std::string s;
  s.reserve(b.size() * 2);
  for (uint8_t c : b) {
    s.push_back(kHexDigits[c >> 4]);
    s.push_back(kHexDigits[c & 0xf]);
  }
  return s;
}

static int hex_val(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

Bytes from_hex(const std::string& s) {
  if (s.size() % 2 != 0) throw ParseError("hex string has odd length");
  Bytes out(s.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    int hi = hex_val(s[2 * i]), lo = hex_val(s[2 * i + 1]);
    if (hi < 0 || lo < 0) throw ParseError("bad hex digit");
    out[i] = static_cast<uint8_t>(hi << 4 | lo);
  }
  return out;
}

Bytes xor_bytes(const Bytes& a, const Bytes& b) {
  if (a.size() != b.size()) throw std::invalid_argument("xor_bytes: length mismatch");
  Bytes out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

void mask_to_bits(Bytes& b, size_t nbits) {
  if (b.size() != bytes_for_bits(nbits)) throw std::invalid_argument("mask_to_bits: size");
  if (nbits % 8 != 0 && !b.empty()) b.back() &= static_cast<uint8_t>((1u << (nbits % 8)) - 1);
}

bool get_bit(const Bytes& b, size_t i) { return (b.at(i / 8) >> (i % 8)) & 1; }

Bytes truncate_bits(const Bytes& b, size_t nbits) {
  if (b.size() * 8 < nbits) throw std::invalid_argument("truncate_bits: source too short");
  Bytes out(b.begin(), b.begin() + bytes_for_bits(nbits));
  mask_to_bits(out, nbits);
  return out;
}

void set_bit(Bytes& b, size_t i, bool v) {
  uint8_t m = static_cast<uint8_t>(1u << (i % 8));
  if (v)
    b.at(i / 8) |= m;
  else
    b.at(i / 8) &= static_cast<uint8_t>(~m);
}

void put_u32(Bytes& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint32_t read_u32(const Bytes& in, size_t& pos) {
  if (pos + 4 > in.size()) throw ParseError("read_u32: truncated");
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(in[pos + i]) << (8 * i);
  pos += 4;
  return v;
}

void put_u64(Bytes& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t read_u64(const Bytes& in, size_t& pos) {
  if (pos + 8 > in.size()) throw ParseError("read_u64: truncated");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(in[pos + i]) << (8 * i);
  pos += 8;
  return v;
}

void put_chunk(Bytes& out, const Bytes& chunk) {
  put_u32(out, static_cast<uint32_t>(chunk.size()));
  append(out, chunk);
}

Bytes read_chunk(const Bytes& in, size_t& pos) {
  uint32_t n = read_u32(in, pos);
  if (pos + n > in.size()) throw ParseError("read_chunk: truncated");
  Bytes out(in.begin() + pos, in.begin() + pos + n);
  pos += n;
  return out;
}

}  // namespace scf
