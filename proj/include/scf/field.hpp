#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scf/bytes.hpp"
#include "scf/rng.hpp"

namespace scf {

// Small finite fields for the share code: binary extensions GF(2^w) with a
// pinned reduction polynomial, and prime fields GF(p) for hand-checkable
// tests. Elements are canonical uint32 representatives.
struct FieldSpec {
  enum class Kind { BinaryExtension, Prime };

  Kind kind = Kind::BinaryExtension;
  uint32_t width = 0;      // w for GF(2^w)
  uint32_t reduction = 0;  // reduction polynomial incl. the x^w term
  uint32_t prime = 0;      // modulus for GF(p)

  static FieldSpec gf2ext(uint32_t w);  // pinned irreducible per width
  static FieldSpec gfp(uint32_t p);

  uint32_t order() const;
  uint32_t element_bits() const;
  size_t element_bytes() const { return (element_bits() + 7) / 8; }

  std::string to_string() const;  // e.g. "gf2:16:1100b" or "gfp:13"
  static FieldSpec parse(const std::string& s);

  bool operator==(const FieldSpec&) const = default;
};

struct Fe {
  uint32_t v = 0;
  bool operator==(const Fe&) const = default;
};

class Field {
 public:
  explicit Field(FieldSpec spec);

  const FieldSpec& spec() const { return spec_; }
  uint32_t order() const { return order_; }

  Fe zero() const { return Fe{0}; }
  Fe one() const { return Fe{1}; }
  Fe from_uint(uint32_t v) const;

  Fe add(Fe a, Fe b) const;
  Fe sub(Fe a, Fe b) const;
  Fe neg(Fe a) const;
  Fe mul(Fe a, Fe b) const;
  Fe inv(Fe a) const;  // throws on zero
  Fe pow(Fe a, uint64_t e) const;

  Fe sample(Rng& rng) const { return Fe{static_cast<uint32_t>(rng.uniform(order_))}; }

  // Canonical little-endian fixed-width encoding; a bijection between
  // elements and element_bits-bit strings for binary-extension fields.
  Bytes serialize(Fe a) const;
  Fe deserialize(const Bytes& b, size_t& pos) const;

 private:
  void check(Fe a) const;

  FieldSpec spec_;
  uint32_t order_;
};

// Dense polynomial over a field, low-degree coefficient first. The zero
// polynomial is an empty coefficient vector.
struct Poly {
  std::vector<Fe> coeffs;

  bool is_zero() const { return coeffs.empty(); }
  // degree of the zero polynomial is -1
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

void poly_normalize(Poly& p);
Fe poly_eval(const Field& f, const Poly& p, Fe x);  // Horner
Poly poly_add(const Field& f, const Poly& a, const Poly& b);
Poly poly_mul(const Field& f, const Poly& a, const Poly& b);
// Euclidean division; returns {quotient, remainder}.
std::pair<Poly, Poly> poly_divmod(const Field& f, const Poly& a, const Poly& b);

// Unique polynomial of degree < points.size() through the given points.
// Throws on duplicate x-coordinates.
Poly interpolate(const Field& f, const std::vector<std::pair<Fe, Fe>>& points);

}  // namespace scf
