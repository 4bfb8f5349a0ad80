#include "scf/field.hpp"

#include <array>
#include <sstream>

namespace scf {

// One fixed irreducible polynomial per width, so that a FieldSpec written to a
// transcript header pins the arithmetic exactly.
static uint32_t pinned_reduction(uint32_t w) {
  switch (w) {
    case 1: return 0x3;        // x + 1
    case 2: return 0x7;        // x^2 + x + 1
    case 3: return 0xB;        // x^3 + x + 1
    case 4: return 0x13;       // x^4 + x + 1
    case 5: return 0x25;       // x^5 + x^2 + 1
    case 6: return 0x43;       // x^6 + x + 1
    case 7: return 0x89;       // x^7 + x^3 + 1
    case 8: return 0x11B;      // x^8 + x^4 + x^3 + x + 1
    case 9: return 0x211;      // x^9 + x^4 + 1
    case 10: return 0x409;     // x^10 + x^3 + 1
    case 11: return 0x805;     // x^11 + x^2 + 1
    case 12: return 0x1053;    // x^12 + x^6 + x^4 + x + 1
    case 13: return 0x201B;    // x^13 + x^4 + x^3 + x + 1
    case 14: return 0x4143;    // x^14 + x^8 + x^6 + x + 1
    case 15: return 0x8003;    // x^15 + x + 1
    case 16: return 0x1100B;   // x^16 + x^12 + x^3 + x + 1
    default: throw std::invalid_argument("FieldSpec: unsupported width (1..16)");
  }
}

FieldSpec FieldSpec::gf2ext(uint32_t w) {
  FieldSpec s;
  s.kind = Kind::BinaryExtension;
  s.width = w;
  s.reduction = pinned_reduction(w);
  return s;
}

FieldSpec FieldSpec::gfp(uint32_t p) {
  if (p < 2 || p > (1u << 16)) throw std::invalid_argument("FieldSpec: prime out of range");
  for (uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) throw std::invalid_argument("FieldSpec: modulus not prime");
  FieldSpec s;
  s.kind = Kind::Prime;
  s.prime = p;
  return s;
}

uint32_t FieldSpec::order() const {
  return kind == Kind::BinaryExtension ? (1u << width) : prime;
}

uint32_t FieldSpec::element_bits() const {
  if (kind == Kind::BinaryExtension) return width;
  uint32_t b = 1;
  while ((1u << b) < prime) ++b;
  return b;
}

std::string FieldSpec::to_string() const {
  std::ostringstream os;
  if (kind == Kind::BinaryExtension)
    os << "gf2:" << width << ":" << std::hex << reduction;
  else
    os << "gfp:" << prime;
  return os.str();
}

FieldSpec FieldSpec::parse(const std::string& s) {
  if (s.rfind("gf2:", 0) == 0) {
    size_t c = s.find(':', 4);
    if (c == std::string::npos) throw ParseError("FieldSpec: bad gf2 string");
    uint32_t w = static_cast<uint32_t>(std::stoul(s.substr(4, c - 4)));
    uint32_t red = static_cast<uint32_t>(std::stoul(s.substr(c + 1), nullptr, 16));
    FieldSpec spec = gf2ext(w);
    if (spec.reduction != red) throw ParseError("FieldSpec: unknown reduction polynomial");
    return spec;
  }
  if (s.rfind("gfp:", 0) == 0) return gfp(static_cast<uint32_t>(std::stoul(s.substr(4))));
  throw ParseError("FieldSpec: unrecognized: " + s);
}

Field::Field(FieldSpec spec) : spec_(spec), order_(spec.order()) {}

void Field::check(Fe a) const {
  if (a.v >= order_) throw std::invalid_argument("field element not reduced (field mismatch?)");
}

Fe Field::from_uint(uint32_t v) const {
  if (spec_.kind == FieldSpec::Kind::BinaryExtension) {
    if (v >= order_) throw std::invalid_argument("from_uint: out of range");
    return Fe{v};
  }
  return Fe{v % spec_.prime};
}

Fe Field::add(Fe a, Fe b) const {
  check(a);
  check(b);
  if (spec_.kind == FieldSpec::Kind::BinaryExtension) return Fe{a.v ^ b.v};
  uint32_t s = a.v + b.v;
  if (s >= spec_.prime) s -= spec_.prime;
  return Fe{s};
}

Fe Field::neg(Fe a) const {
  check(a);
  if (spec_.kind == FieldSpec::Kind::BinaryExtension) return a;
  return Fe{a.v == 0 ? 0 : spec_.prime - a.v};
}

Fe Field::sub(Fe a, Fe b) const { return add(a, neg(b)); }

Fe Field::mul(Fe a, Fe b) const {
  check(a);
  check(b);
  if (spec_.kind == FieldSpec::Kind::Prime)
    return Fe{static_cast<uint32_t>((static_cast<uint64_t>(a.v) * b.v) % spec_.prime)};
  uint32_t x = a.v, y = b.v, r = 0;
  uint32_t top = 1u << spec_.width;
  while (y) {
    if (y & 1) r ^= x;
    y >>= 1;
    x <<= 1;
    if (x & top) x ^= spec_.reduction;
  }
  return Fe{r};
}

Fe Field::pow(Fe a, uint64_t e) const {
  check(a);
  Fe r = one(), base = a;
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

Fe Field::inv(Fe a) const {
  check(a);
  if (a.v == 0) throw std::domain_error("field inverse of zero");
  return pow(a, order_ - 2);
}

Bytes Field::serialize(Fe a) const {
  check(a);
  Bytes out(spec_.element_bytes());
  for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<uint8_t>(a.v >> (8 * i));
  return out;
}

Fe Field::deserialize(const Bytes& b, size_t& pos) const {
  size_t n = spec_.element_bytes();
  if (pos + n > b.size()) throw ParseError("field element: truncated");
  uint32_t v = 0;
  for (size_t i = 0; i < n; ++i) v |= static_cast<uint32_t>(b[pos + i]) << (8 * i);
  pos += n;
  if (v >= order_) throw ParseError("field element: out of range");
  return Fe{v};
}

void poly_normalize(Poly& p) {
  while (!p.coeffs.empty() && p.coeffs.back().v == 0) p.coeffs.pop_back();
}

Fe poly_eval(const Field& f, const Poly& p, Fe x) {
  Fe acc = f.zero();
  for (size_t i = p.coeffs.size(); i-- > 0;) acc = f.add(f.mul(acc, x), p.coeffs[i]);
  return acc;
}

Poly poly_add(const Field& f, const Poly& a, const Poly& b) {
  Poly r;
  r.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), f.zero());
  for (size_t i = 0; i < r.coeffs.size(); ++i) {
    Fe x = i < a.coeffs.size() ? a.coeffs[i] : f.zero();
    Fe y = i < b.coeffs.size() ? b.coeffs[i] : f.zero();
    r.coeffs[i] = f.add(x, y);
  }
  poly_normalize(r);
  return r;
}

Poly poly_mul(const Field& f, const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Poly r;
  r.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, f.zero());
  for (size_t i = 0; i < a.coeffs.size(); ++i)
    for (size_t j = 0; j < b.coeffs.size(); ++j)
      r.coeffs[i + j] = f.add(r.coeffs[i + j], f.mul(a.coeffs[i], b.coeffs[j]));
  poly_normalize(r);
  return r;
}

std::pair<Poly, Poly> poly_divmod(const Field& f, const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("poly division by zero");
  Poly rem = a, quot;
  poly_normalize(rem);
  if (rem.degree() >= b.degree())
    quot.coeffs.assign(rem.coeffs.size() - b.coeffs.size() + 1, f.zero());
  Fe lead_inv = f.inv(b.coeffs.back());
  while (!rem.is_zero() && rem.degree() >= b.degree()) {
    size_t shift = rem.coeffs.size() - b.coeffs.size();
    Fe c = f.mul(rem.coeffs.back(), lead_inv);
    quot.coeffs[shift] = c;
    for (size_t i = 0; i < b.coeffs.size(); ++i)
      rem.coeffs[shift + i] = f.sub(rem.coeffs[shift + i], f.mul(c, b.coeffs[i]));
    poly_normalize(rem);
  }
  poly_normalize(quot);
  return {quot, rem};
}

Poly interpolate(const Field& f, const std::vector<std::pair<Fe, Fe>>& points) {
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j)
      if (points[i].first == points[j].first)
        throw std::invalid_argument("interpolate: duplicate x-coordinate");

  // Newton form: extend the interpolant one point at a time.
  size_t n = points.size();
  Poly result;
  Poly basis;  // prod (X - x_i) over processed points
  basis.coeffs = {f.one()};
  for (size_t i = 0; i < n; ++i) {
    Fe xi = points[i].first;
    Fe val = points[i].second;
    // value of current result at xi
    Fe cur = poly_eval(f, result, xi);
    Fe basis_at = poly_eval(f, basis, xi);
    Fe c = f.mul(f.sub(val, cur), f.inv(basis_at));
    // result += c * basis
    Poly scaled = basis;
    for (auto& cc : scaled.coeffs) cc = f.mul(cc, c);
    result = poly_add(f, result, scaled);
    // basis *= (X - xi)
    Poly lin;
    lin.coeffs = {f.neg(xi), f.one()};
    basis = poly_mul(f, basis, lin);
  }
  return result;
}

}  // namespace scf
