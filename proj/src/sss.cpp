#include "scf/sss.hpp"

#include <algorithm>

namespace scf {

SssParams::SssParams(uint32_t sigma_, FieldSpec field_) : sigma(sigma_), Sigma(4 * sigma_), field(field_) {
  if (sigma == 0) throw std::invalid_argument("SssParams: sigma must be positive");
  // all Sigma + sigma evaluation points must be distinct nonzero elements
  if (field.order() < Sigma + sigma + 1)
    throw std::invalid_argument("SssParams: field too small for Sigma + sigma + 1 points");
}

Fe SssParams::point(int64_t j) const {
  if (j < 1 - static_cast<int64_t>(sigma) || j > static_cast<int64_t>(Sigma))
    throw std::out_of_range("SssParams::point: index");
  return Fe{static_cast<uint32_t>(j + sigma)};
}

void SubsetS::validate(const SssParams& p) const {
  if (positions.size() != p.sigma) throw std::invalid_argument("SubsetS: size must be sigma");
  for (size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] < 1 || positions[i] > p.Sigma) throw std::invalid_argument("SubsetS: position range");
    if (i > 0 && positions[i] <= positions[i - 1])
      throw std::invalid_argument("SubsetS: positions must be strictly increasing");
  }
}

bool SubsetS::contains(uint32_t pos) const {
  return std::binary_search(positions.begin(), positions.end(), pos);
}

ShareVector sss_share(const SssParams& p, const Message& m, const Message& s) {
  if (m.size() != p.sigma || s.size() != p.sigma)
    throw std::invalid_argument("sss_share: message/randomizer length");
  Field f(p.field);
  std::vector<std::pair<Fe, Fe>> pts;
  pts.reserve(2 * p.sigma);
  for (uint32_t i = 1; i <= p.sigma; ++i) pts.emplace_back(p.message_point(i), m[i - 1]);
  for (uint32_t i = 1; i <= p.sigma; ++i) pts.emplace_back(p.share_point(i), s[i - 1]);
  Poly poly = interpolate(f, pts);
  ShareVector out(p.Sigma);
  for (uint32_t i = 1; i <= p.Sigma; ++i) out[i - 1] = poly_eval(f, poly, p.share_point(i));
  return out;
}

static Poly interpolant_from_first(const SssParams& p, const Field& f, const ShareVector& v) {
  std::vector<std::pair<Fe, Fe>> pts;
  pts.reserve(2 * p.sigma);
  for (uint32_t i = 1; i <= 2 * p.sigma; ++i) pts.emplace_back(p.share_point(i), v[i - 1]);
  return interpolate(f, pts);
}

bool sss_consistent(const SssParams& p, const ShareVector& v) {
  if (v.size() != p.Sigma) throw std::invalid_argument("sss_consistent: share count");
  Field f(p.field);
  Poly poly = interpolant_from_first(p, f, v);
  for (uint32_t i = 2 * p.sigma + 1; i <= p.Sigma; ++i)
    if (!(poly_eval(f, poly, p.share_point(i)) == v[i - 1])) return false;
  return true;
}

Message sss_reconstruct(const SssParams& p, const ShareVector& v) {
  if (!sss_consistent(p, v)) throw std::invalid_argument("sss_reconstruct: inconsistent shares");
  Field f(p.field);
  Poly poly = interpolant_from_first(p, f, v);
  Message m(p.sigma);
  for (uint32_t i = 1; i <= p.sigma; ++i) m[i - 1] = poly_eval(f, poly, p.message_point(i));
  return m;
}

// Berlekamp-Welch with error budget e: find E (monic, deg e) and Q
// (deg <= 2*sigma-1+e) with Q(x_i) = y_i * E(x_i) for all i; then f = Q / E.
// Unknowns are the e lower coefficients of E and the 2*sigma+e coefficients
// of Q; the monic term moves to the right-hand side.
static std::optional<Poly> berlekamp_welch(const SssParams& p, const Field& f, const ShareVector& y,
                                           uint32_t e) {
  uint32_t k = 2 * p.sigma;  // number of codeword coefficients
  uint32_t nq = k + e;
  uint32_t cols = nq + e;
  uint32_t rows = p.Sigma;
  // rows: Q(x_i) - y_i * (E_low(x_i)) = y_i * x_i^e
  std::vector<std::vector<Fe>> a(rows, std::vector<Fe>(cols + 1, f.zero()));
  for (uint32_t r = 0; r < rows; ++r) {
    Fe x = p.share_point(r + 1);
    Fe xp = f.one();
    for (uint32_t c = 0; c < nq; ++c) {
      a[r][c] = xp;
      xp = f.mul(xp, x);
    }
    xp = f.one();
    for (uint32_t c = 0; c < e; ++c) {
      a[r][nq + c] = f.neg(f.mul(y[r], xp));
      xp = f.mul(xp, x);
    }
    a[r][cols] = f.mul(y[r], xp);  // xp == x^e here
  }
  // Gaussian elimination; free variables pinned to zero, then verify.
  std::vector<int> pivot_of_col(cols, -1);
  uint32_t rank = 0;
  for (uint32_t c = 0; c < cols && rank < rows; ++c) {
    uint32_t sel = rank;
    while (sel < rows && a[sel][c].v == 0) ++sel;
    if (sel == rows) continue;
    std::swap(a[sel], a[rank]);
    Fe piv_inv = f.inv(a[rank][c]);
    for (uint32_t cc = c; cc <= cols; ++cc) a[rank][cc] = f.mul(a[rank][cc], piv_inv);
    for (uint32_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c].v == 0) continue;
      Fe factor = a[r][c];
      for (uint32_t cc = c; cc <= cols; ++cc) a[r][cc] = f.sub(a[r][cc], f.mul(factor, a[rank][cc]));
    }
    pivot_of_col[c] = static_cast<int>(rank);
    ++rank;
  }
  for (uint32_t r = rank; r < rows; ++r)
    if (a[r][cols].v != 0) return std::nullopt;  // inconsistent system
  std::vector<Fe> sol(cols, f.zero());
  for (uint32_t c = 0; c < cols; ++c)
    if (pivot_of_col[c] >= 0) sol[c] = a[pivot_of_col[c]][cols];

  Poly Q, E;
  Q.coeffs.assign(sol.begin(), sol.begin() + nq);
  poly_normalize(Q);
  E.coeffs.assign(sol.begin() + nq, sol.begin() + nq + e);
  E.coeffs.push_back(f.one());  // monic x^e term
  auto [quot, rem] = poly_divmod(f, Q, E);
  if (!rem.is_zero()) return std::nullopt;
  if (quot.degree() >= static_cast<int>(k)) return std::nullopt;
  return quot;
}

std::optional<DecodeResult> sss_nearest_codeword(const SssParams& p, const ShareVector& noisy) {
  if (noisy.size() != p.Sigma) throw std::invalid_argument("sss_nearest_codeword: share count");
  Field f(p.field);
  // ascending error budget, so the first hit is the nearest codeword
  for (uint32_t e = 0; e <= p.sigma; ++e) {
    auto poly = berlekamp_welch(p, f, noisy, e);
    if (!poly) continue;
    DecodeResult res;
    res.codeword.resize(p.Sigma);
    for (uint32_t i = 1; i <= p.Sigma; ++i) res.codeword[i - 1] = poly_eval(f, *poly, p.share_point(i));
    res.distance = static_cast<uint32_t>(hamming_distance(res.codeword, noisy));
    if (res.distance > e) continue;  // spurious solution beyond the budget
    res.message.resize(p.sigma);
    for (uint32_t i = 1; i <= p.sigma; ++i) res.message[i - 1] = poly_eval(f, *poly, p.message_point(i));
    return res;
  }
  return std::nullopt;
}

Message sss_restrict(const ShareVector& v, const SubsetS& S, const SssParams& p) {
  S.validate(p);
  if (v.size() != p.Sigma) throw std::invalid_argument("sss_restrict: share count");
  Message out;
  out.reserve(S.positions.size());
  for (uint32_t pos : S.positions) out.push_back(v[pos - 1]);
  return out;
}

size_t hamming_distance(const ShareVector& a, const ShareVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
  size_t d = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) ++d;
  return d;
}

Message random_message(const SssParams& p, Rng& rng) {
  Field f(p.field);
  Message m(p.sigma);
  for (auto& x : m) x = f.sample(rng);
  return m;
}

Bytes serialize_shares(const Field& f, const std::vector<Fe>& v) {
  Bytes out;
  out.reserve(v.size() * f.spec().element_bytes());
  for (Fe x : v) append(out, f.serialize(x));
  return out;
}

std::vector<Fe> deserialize_shares(const Field& f, const Bytes& b, size_t count) {
  size_t pos = 0;
  std::vector<Fe> out(count);
  for (auto& x : out) x = f.deserialize(b, pos);
  if (pos != b.size()) throw ParseError("deserialize_shares: trailing bytes");
  return out;
}

}  // namespace scf
