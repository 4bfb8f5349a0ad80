#include "scf/zkpk.hpp"

#include <algorithm>
#include <sstream>

namespace scf {

// ---------------------------------------------------------------------------
// Graph utilities

Bytes GraphIsoInstance::serialize() const {
  Bytes out;
  put_u32(out, v);
  Bytes bits(bytes_for_bits(2 * static_cast<size_t>(v) * v), 0);
  for (size_t i = 0; i < static_cast<size_t>(v) * v; ++i) {
    if (g0[i]) set_bit(bits, i, true);
    if (g1[i]) set_bit(bits, static_cast<size_t>(v) * v + i, true);
  }
  append(out, bits);
  return out;
}

GraphIsoInstance GraphIsoInstance::deserialize(const Bytes& b) {
  size_t pos = 0;
  GraphIsoInstance x;
  x.v = read_u32(b, pos);
  if (x.v == 0 || x.v > 4096) throw ParseError("GraphIsoInstance: vertex count");
  size_t cells = static_cast<size_t>(x.v) * x.v;
  if (b.size() - pos != bytes_for_bits(2 * cells)) throw ParseError("GraphIsoInstance: size");
  Bytes bits(b.begin() + pos, b.end());
  x.g0.resize(cells);
  x.g1.resize(cells);
  for (size_t i = 0; i < cells; ++i) {
    x.g0[i] = get_bit(bits, i) ? 1 : 0;
    x.g1[i] = get_bit(bits, cells + i) ? 1 : 0;
  }
  return x;
}

bool is_permutation(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  for (uint32_t v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

Permutation random_permutation(uint32_t v, Rng& rng) {
  Permutation p(v);
  for (uint32_t i = 0; i < v; ++i) p[i] = i;
  for (uint32_t i = v; i > 1; --i) std::swap(p[i - 1], p[rng.uniform(i)]);
  return p;
}

Permutation invert_permutation(const Permutation& p) {
  Permutation inv(p.size());
  for (uint32_t i = 0; i < p.size(); ++i) inv[p[i]] = i;
  return inv;
}

Permutation compose_permutations(const Permutation& f, const Permutation& g) {
  Permutation r(f.size());
  for (uint32_t i = 0; i < f.size(); ++i) r[i] = f[g[i]];
  return r;
}

std::vector<uint8_t> apply_permutation(const std::vector<uint8_t>& adj, uint32_t v,
                                       const Permutation& p) {
  std::vector<uint8_t> out(adj.size());
  for (uint32_t i = 0; i < v; ++i)
    for (uint32_t j = 0; j < v; ++j) out[static_cast<size_t>(p[i]) * v + p[j]] = adj[static_cast<size_t>(i) * v + j];
  return out;
}

Bytes serialize_permutation(const Permutation& p) {
  Bytes out;
  for (uint32_t v : p) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
  }
  return out;
}

std::optional<Permutation> deserialize_permutation(const Bytes& b, uint32_t v) {
  if (b.size() != static_cast<size_t>(v) * 2) return std::nullopt;
  Permutation p(v);
  for (uint32_t i = 0; i < v; ++i) p[i] = static_cast<uint32_t>(b[2 * i]) | (static_cast<uint32_t>(b[2 * i + 1]) << 8);
  if (!is_permutation(p)) return std::nullopt;
  return p;
}

Relation graph_iso_relation() {
  Relation r;
  r.name = "graph-iso";
  r.holds = [](const Bytes& xb, const Bytes& wb) -> bool {
    GraphIsoInstance x;
    try {
      x = GraphIsoInstance::deserialize(xb);
    } catch (const ParseError&) {
      return false;
    }
    auto phi = deserialize_permutation(wb, x.v);
    if (!phi) return false;
    return apply_permutation(x.g0, x.v, *phi) == x.g1;
  };
  return r;
}

std::pair<GraphIsoInstance, Permutation> random_gi_instance(uint32_t v, double edge_density,
                                                            Rng& rng) {
  GraphIsoInstance x;
  x.v = v;
  size_t cells = static_cast<size_t>(v) * v;
  x.g0.assign(cells, 0);
  uint64_t threshold = static_cast<uint64_t>(edge_density * 4294967296.0);
  for (uint32_t i = 0; i < v; ++i)
    for (uint32_t j = i + 1; j < v; ++j) {
      uint8_t bit = (rng.next_u64() & 0xffffffffu) < threshold ? 1 : 0;
      x.g0[static_cast<size_t>(i) * v + j] = bit;
      x.g0[static_cast<size_t>(j) * v + i] = bit;
    }
  Permutation phi = random_permutation(v, rng);
  x.g1 = apply_permutation(x.g0, v, phi);
  return {x, phi};
}

std::string gi_instance_to_text(const GraphIsoInstance& x, const Permutation* witness) {
  std::ostringstream os;
  os << "v " << x.v << "\n";
  for (uint32_t i = 0; i < x.v; ++i) {
    os << "g0 ";
    for (uint32_t j = 0; j < x.v; ++j) os << (x.g0[static_cast<size_t>(i) * x.v + j] ? '1' : '0');
    os << "\n";
  }
  for (uint32_t i = 0; i < x.v; ++i) {
    os << "g1 ";
    for (uint32_t j = 0; j < x.v; ++j) os << (x.g1[static_cast<size_t>(i) * x.v + j] ? '1' : '0');
    os << "\n";
  }
  if (witness) {
    os << "phi";
    for (uint32_t p : *witness) os << " " << p;
    os << "\n";
  }
  return os.str();
}

std::pair<GraphIsoInstance, std::optional<Permutation>> gi_instance_from_text(
    const std::string& text) {
  std::istringstream is(text);
  std::string kind;
  GraphIsoInstance x;
  std::optional<Permutation> witness;
  std::vector<std::string> g0_rows, g1_rows;
  while (is >> kind) {
    if (kind == "v") {
      is >> x.v;
    } else if (kind == "g0" || kind == "g1") {
      std::string row;
      is >> row;
      (kind == "g0" ? g0_rows : g1_rows).push_back(row);
    } else if (kind == "phi") {
      Permutation p;
      uint32_t val;
      while (is >> val) p.push_back(val);
      witness = p;
    } else {
      throw ParseError("gi instance: unknown token '" + kind + "'");
    }
  }
  if (x.v == 0 || g0_rows.size() != x.v || g1_rows.size() != x.v)
    throw ParseError("gi instance: bad row count");
  auto fill = [&](const std::vector<std::string>& rows, std::vector<uint8_t>& adj) {
    adj.assign(static_cast<size_t>(x.v) * x.v, 0);
    for (uint32_t i = 0; i < x.v; ++i) {
      if (rows[i].size() != x.v) throw ParseError("gi instance: bad row length");
      for (uint32_t j = 0; j < x.v; ++j) adj[static_cast<size_t>(i) * x.v + j] = rows[i][j] == '1';
    }
  };
  fill(g0_rows, x.g0);
  fill(g1_rows, x.g1);
  if (witness && !is_permutation(*witness)) throw ParseError("gi instance: bad witness");
  if (witness && witness->size() != x.v) throw ParseError("gi instance: witness size");
  return {x, witness};
}

// ---------------------------------------------------------------------------
// Base encoding, one-bit challenge.
//
// Layout: [H : v^2 bits][pi : v*pw bits][rho : v*pw bits], pw = bits per
// vertex index. S(0) covers H and pi, S(1) covers H and rho.

namespace {

uint32_t perm_entry_bits(uint32_t v) {
  uint32_t b = 1;
  while ((1u << b) < v) ++b;
  return b;
}

struct GiLayout {
  uint32_t v;
  size_t h_bits;
  size_t table_bits;
  size_t total() const { return h_bits + 2 * table_bits; }
};

GiLayout gi_layout(uint32_t v) {
  GiLayout l;
  l.v = v;
  l.h_bits = static_cast<size_t>(v) * v;
  l.table_bits = static_cast<size_t>(v) * perm_entry_bits(v);
  return l;
}

void write_table(Bytes& bits, size_t offset, const Permutation& p, uint32_t v) {
  uint32_t pw = perm_entry_bits(v);
  for (uint32_t i = 0; i < v; ++i)
    for (uint32_t k = 0; k < pw; ++k) set_bit(bits, offset + static_cast<size_t>(i) * pw + k, (p[i] >> k) & 1);
}

std::optional<Permutation> read_table(const std::vector<bool>& bits, size_t offset, uint32_t v) {
  uint32_t pw = perm_entry_bits(v);
  Permutation p(v);
  for (uint32_t i = 0; i < v; ++i) {
    uint32_t val = 0;
    for (uint32_t k = 0; k < pw; ++k)
      if (bits[offset + static_cast<size_t>(i) * pw + k]) val |= 1u << k;
    if (val >= v) return std::nullopt;
    p[i] = val;
  }
  if (!is_permutation(p)) return std::nullopt;
  return p;
}

std::vector<uint8_t> read_matrix(const std::vector<bool>& bits, size_t offset, uint32_t v) {
  std::vector<uint8_t> m(static_cast<size_t>(v) * v);
  for (size_t i = 0; i < m.size(); ++i) m[i] = bits[offset + i] ? 1 : 0;
  return m;
}

class GiEncoding : public WitnessEncoding {
 public:
  explicit GiEncoding(uint32_t v) : v_(v), layout_(gi_layout(v)) {}

  size_t challenge_bits() const override { return 1; }
  size_t code_bits(const Bytes&) const override { return layout_.total(); }
  size_t randomness_bits(const Bytes&) const override {
    // one uniform permutation; counted as the bits of its index
    uint64_t fact = 1;
    for (uint32_t i = 2; i <= v_; ++i) fact *= i;
    size_t b = 1;
    while ((1ull << b) < fact) ++b;
    return b;
  }

  Bytes encode(const Bytes& xb, const Bytes& wb, Rng& rng) const override {
    GraphIsoInstance x = GraphIsoInstance::deserialize(xb);
    auto phi = deserialize_permutation(wb, x.v);
    if (!phi) throw std::invalid_argument("gi encode: witness is not a permutation");
    return gi_encode_with_permutation(x, *phi, random_permutation(x.v, rng));
  }

  Bytes decode(const Bytes& xb, const Bytes& e) const override {
    GraphIsoInstance x = GraphIsoInstance::deserialize(xb);
    std::vector<bool> bits = unpack(e);
    auto pi = read_table(bits, layout_.h_bits, x.v);
    auto rho = read_table(bits, layout_.h_bits + layout_.table_bits, x.v);
    std::vector<uint8_t> h = read_matrix(bits, 0, x.v);
    if (pi && rho && apply_permutation(x.g0, x.v, *pi) == h &&
        apply_permutation(x.g1, x.v, *rho) == h)
      return serialize_permutation(compose_permutations(invert_permutation(*rho), *pi));
    return Bytes{0xff};  // fixed non-witness sentinel
  }

  std::vector<uint32_t> select(const Bytes&, const Bytes& s) const override {
    bool challenge = !s.empty() && get_bit(s, 0);
    std::vector<uint32_t> pos;
    pos.reserve(layout_.h_bits + layout_.table_bits);
    for (size_t i = 0; i < layout_.h_bits; ++i) pos.push_back(static_cast<uint32_t>(i));
    size_t table = challenge ? layout_.h_bits + layout_.table_bits : layout_.h_bits;
    for (size_t i = 0; i < layout_.table_bits; ++i) pos.push_back(static_cast<uint32_t>(table + i));
    return pos;
  }

  bool judge(const Bytes& xb, const Bytes& s, const std::vector<bool>& revealed) const override {
    GraphIsoInstance x = GraphIsoInstance::deserialize(xb);
    if (revealed.size() != layout_.h_bits + layout_.table_bits) return false;
    bool challenge = !s.empty() && get_bit(s, 0);
    std::vector<uint8_t> h = read_matrix(revealed, 0, x.v);
    auto table = read_table(revealed, layout_.h_bits, x.v);
    if (!table) return false;
    const auto& base = challenge ? x.g1 : x.g0;
    return apply_permutation(base, x.v, *table) == h;
  }

  std::vector<bool> simulate(const Bytes& xb, const Bytes& s, Rng& rng) const override {
    GraphIsoInstance x = GraphIsoInstance::deserialize(xb);
    bool challenge = !s.empty() && get_bit(s, 0);
    return gi_simulate_with_permutation(x, challenge, random_permutation(x.v, rng));
  }

 private:
  std::vector<bool> unpack(const Bytes& e) const {
    std::vector<bool> bits(layout_.total());
    for (size_t i = 0; i < bits.size(); ++i) bits[i] = get_bit(e, i);
    return bits;
  }

  uint32_t v_;
  GiLayout layout_;
};

}  // namespace

Bytes gi_encode_with_permutation(const GraphIsoInstance& x, const Permutation& phi,
                                 const Permutation& pi) {
  GiLayout l = gi_layout(x.v);
  std::vector<uint8_t> h = apply_permutation(x.g0, x.v, pi);
  Permutation rho = compose_permutations(pi, invert_permutation(phi));
  Bytes e(bytes_for_bits(l.total()), 0);
  for (size_t i = 0; i < l.h_bits; ++i)
    if (h[i]) set_bit(e, i, true);
  write_table(e, l.h_bits, pi, x.v);
  write_table(e, l.h_bits + l.table_bits, rho, x.v);
  return e;
}

std::vector<bool> gi_simulate_with_permutation(const GraphIsoInstance& x, bool challenge,
                                               const Permutation& tau) {
  GiLayout l = gi_layout(x.v);
  const auto& base = challenge ? x.g1 : x.g0;
  std::vector<uint8_t> h = apply_permutation(base, x.v, tau);
  std::vector<bool> out;
  out.reserve(l.h_bits + l.table_bits);
  for (size_t i = 0; i < l.h_bits; ++i) out.push_back(h[i] != 0);
  uint32_t pw = perm_entry_bits(x.v);
  for (uint32_t i = 0; i < x.v; ++i)
    for (uint32_t k = 0; k < pw; ++k) out.push_back((tau[i] >> k) & 1);
  return out;
}

std::shared_ptr<const WitnessEncoding> gi_encoding(uint32_t v) {
  if (v < 2) throw std::invalid_argument("gi_encoding: need at least two vertices");
  return std::make_shared<GiEncoding>(v);
}

// ---------------------------------------------------------------------------
// Parallel repetition

namespace {

class RepeatedEncoding : public WitnessEncoding {
 public:
  RepeatedEncoding(std::shared_ptr<const WitnessEncoding> base, size_t sigma, Relation rel)
      : base_(std::move(base)), sigma_(sigma), rel_(std::move(rel)) {
    if (base_->challenge_bits() != 1)
      throw std::invalid_argument("parallel_repeat: base must have one-bit challenges");
  }

  size_t challenge_bits() const override { return sigma_; }
  size_t code_bits(const Bytes& x) const override { return sigma_ * base_->code_bits(x); }
  size_t randomness_bits(const Bytes& x) const override { return sigma_ * base_->randomness_bits(x); }

  Bytes encode(const Bytes& x, const Bytes& w, Rng& rng) const override {
    size_t n1 = base_->code_bits(x);
    Bytes e(bytes_for_bits(sigma_ * n1), 0);
    for (size_t c = 0; c < sigma_; ++c) {
      Bytes copy = base_->encode(x, w, rng);
      for (size_t i = 0; i < n1; ++i) set_bit(e, c * n1 + i, get_bit(copy, i));
    }
    return e;
  }

  Bytes decode(const Bytes& x, const Bytes& e) const override {
    size_t n1 = base_->code_bits(x);
    for (size_t c = 0; c < sigma_; ++c) {
      Bytes copy(bytes_for_bits(n1), 0);
      for (size_t i = 0; i < n1; ++i) set_bit(copy, i, get_bit(e, c * n1 + i));
      Bytes w = base_->decode(x, copy);
      if (rel_.holds(x, w)) return w;
    }
    return Bytes{0xff};
  }

  std::vector<uint32_t> select(const Bytes& x, const Bytes& s) const override {
    size_t n1 = base_->code_bits(x);
    std::vector<uint32_t> pos;
    for (size_t c = 0; c < sigma_; ++c) {
      Bytes sc{static_cast<uint8_t>(get_bit(s, c) ? 1 : 0)};
      for (uint32_t p : base_->select(x, sc)) pos.push_back(static_cast<uint32_t>(c * n1 + p));
    }
    return pos;
  }

  bool judge(const Bytes& x, const Bytes& s, const std::vector<bool>& revealed) const override {
    Bytes s0{0}, s1{1};
    size_t per_copy = base_->select(x, s0).size();
    if (base_->select(x, s1).size() != per_copy) return false;
    if (revealed.size() != sigma_ * per_copy) return false;
    for (size_t c = 0; c < sigma_; ++c) {
      Bytes sc{static_cast<uint8_t>(get_bit(s, c) ? 1 : 0)};
      std::vector<bool> part(revealed.begin() + c * per_copy, revealed.begin() + (c + 1) * per_copy);
      if (!base_->judge(x, sc, part)) return false;
    }
    return true;
  }

  std::vector<bool> simulate(const Bytes& x, const Bytes& s, Rng& rng) const override {
    std::vector<bool> out;
    for (size_t c = 0; c < sigma_; ++c) {
      Bytes sc{static_cast<uint8_t>(get_bit(s, c) ? 1 : 0)};
      std::vector<bool> part = base_->simulate(x, sc, rng);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }

 private:
  std::shared_ptr<const WitnessEncoding> base_;
  size_t sigma_;
  Relation rel_;
};

}  // namespace

std::shared_ptr<const WitnessEncoding> parallel_repeat(std::shared_ptr<const WitnessEncoding> base,
                                                       size_t sigma, Relation rel) {
  return std::make_shared<RepeatedEncoding>(std::move(base), sigma, std::move(rel));
}

// ---------------------------------------------------------------------------
// Protocol parties. Tags: INST, CELLS, OPENS (pos, bit, randomizer triples),
// REFUSE.

namespace {

Bytes encode_bit_opens(const std::vector<uint32_t>& positions, const Bytes& e,
                       const std::vector<Bytes>& randomizers) {
  Bytes out;
  for (uint32_t p : positions) {
    put_u32(out, p);
    out.push_back(get_bit(e, p) ? 1 : 0);
    put_chunk(out, randomizers.at(p));
  }
  return out;
}

struct BitOpen {
  uint32_t pos;
  bool bit;
  Bytes randomizer;
};

std::vector<BitOpen> decode_bit_opens(const Bytes& payload) {
  std::vector<BitOpen> out;
  size_t pos = 0;
  while (pos < payload.size()) {
    BitOpen o;
    o.pos = read_u32(payload, pos);
    if (pos >= payload.size()) throw ParseError("bit open: truncated");
    uint8_t b = payload[pos++];
    if (b > 1) throw ParseError("bit open: not a bit");
    o.bit = b == 1;
    o.randomizer = read_chunk(payload, pos);
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<Frame> commit_encoding(const Bytes& e, size_t nbits, const MixedKey& pk,
                                   SessionCtx& ctx, Rng& rng, std::vector<Bytes>& randomizers,
                                   const Bytes& x) {
  Bytes cells_payload;
  put_u32(cells_payload, static_cast<uint32_t>(nbits));
  randomizers.clear();
  randomizers.reserve(nbits);
  for (size_t i = 0; i < nbits; ++i) {
    Bytes msg{static_cast<uint8_t>(get_bit(e, i) ? 1 : 0)};
    Bytes r = rng.bytes(ctx.scheme().randomizer_len(1));
    put_chunk(cells_payload, ctx.scheme().commit(pk, msg, r));
    randomizers.push_back(std::move(r));
  }
  std::vector<Frame> out;
  out.push_back(Frame{"INST", x});
  out.push_back(Frame{"CELLS", std::move(cells_payload)});
  return out;
}

}  // namespace

std::vector<Frame> ZkpkProver::step(const Frame* in, SessionCtx& ctx) {
  if (done_) return {};
  std::vector<Frame> out;
  if (phase_ == 0) {
    if (!p_.rel.holds(x_, w_)) {
      // an honest prover does not run the protocol on a non-witness
      abort_party();
      return {Frame{"REFUSE", {}}};
    }
    key_flip_ = CoinSlot(p_.key_flip(0, p_.kappa_bits, side_, rng_));
    phase_ = 1;
  }
  if (phase_ == 1) {
    DriveStep d = drive_coin(key_flip_, in, ctx);
    append_frames(out, d.frames);
    if (!d.finished) {
      if (d.leftover) abort_party();
      return out;
    }
    in = d.leftover;
    const Outcome& kb = key_flip_->result();
    if (!kb) {
      abort_party();
      return out;
    }
    pk_ = ctx.scheme().key_from_bits(*kb);
    e_ = p_.enc->encode(x_, w_, rng_);
    auto frames = commit_encoding(e_, p_.enc->code_bits(x_), pk_, ctx, rng_, randomizers_, x_);
    append_frames(out, frames);
    challenge_flip_ = CoinSlot(p_.challenge_flip(1, p_.enc->challenge_bits(), side_, rng_));
    phase_ = 2;
  }
  if (phase_ == 2) {
    DriveStep d = drive_coin(challenge_flip_, in, ctx);
    append_frames(out, d.frames);
    if (!d.finished) {
      if (d.leftover) abort_party();
      return out;
    }
    const Outcome& sc = challenge_flip_->result();
    if (!sc) {
      abort_party();
      return out;
    }
    out.push_back(Frame{"OPENS", encode_bit_opens(p_.enc->select(x_, *sc), e_, randomizers_)});
    finish(Bytes{kJudgeSuccess});
    return out;
  }
  abort_party();
  return out;
}

std::vector<Frame> ZkpkVerifier::step(const Frame* in, SessionCtx& ctx) {
  if (done_) return {};
  std::vector<Frame> out;
  if (in && in->tag == "REFUSE") {
    finish(Bytes{kJudgeAbort});
    return out;
  }
  if (phase_ == 0) {
    key_flip_ = CoinSlot(p_.key_flip(0, p_.kappa_bits, side_, rng_));
    phase_ = 1;
  }
  if (phase_ == 1) {
    DriveStep d = drive_coin(key_flip_, in, ctx);
    append_frames(out, d.frames);
    if (!d.finished) {
      if (d.leftover) abort_party();
      return out;
    }
    in = d.leftover;
    const Outcome& kb = key_flip_->result();
    if (!kb) {
      abort_party();
      return out;
    }
    pk_ = ctx.scheme().key_from_bits(*kb);
    phase_ = 2;
  }
  if (phase_ == 2) {
    if (!in) return out;
    if (in->tag != "INST") {
      abort_party();
      return out;
    }
    x_ = in->payload;
    phase_ = 3;
    return out;
  }
  if (phase_ == 3) {
    if (!in) return out;
    if (in->tag != "CELLS") {
      abort_party();
      return out;
    }
    try {
      size_t pos = 0;
      uint32_t n = read_u32(in->payload, pos);
      if (n != p_.enc->code_bits(x_)) throw ParseError("cell count");
      cells_.clear();
      cells_.reserve(n);
      for (uint32_t i = 0; i < n; ++i) cells_.push_back(read_chunk(in->payload, pos));
      if (pos != in->payload.size()) throw ParseError("trailing");
    } catch (const ParseError&) {
      abort_party();
      return out;
    }
    saw_cells(cells_, ctx);
    challenge_flip_ = CoinSlot(p_.challenge_flip(1, p_.enc->challenge_bits(), side_, rng_));
    phase_ = 4;
    in = nullptr;
  }
  if (phase_ == 4) {
    DriveStep d = drive_coin(challenge_flip_, in, ctx);
    append_frames(out, d.frames);
    if (!d.finished) {
      if (d.leftover) abort_party();
      return out;
    }
    in = d.leftover;
    const Outcome& sc = challenge_flip_->result();
    if (!sc) {
      abort_party();
      return out;
    }
    s_ = *sc;
    phase_ = 5;
  }
  if (phase_ == 5) {
    if (!in) return out;
    if (in->tag != "OPENS") {
      abort_party();
      return out;
    }
    std::vector<BitOpen> opens;
    try {
      opens = decode_bit_opens(in->payload);
    } catch (const ParseError&) {
      finish(Bytes{kJudgeAbort});
      return out;
    }
    std::vector<uint32_t> expected = p_.enc->select(x_, s_);
    if (opens.size() != expected.size()) {
      finish(Bytes{kJudgeAbort});
      return out;
    }
    std::vector<bool> revealed(opens.size());
    for (size_t k = 0; k < opens.size(); ++k) {
      if (opens[k].pos != expected[k] ||
          !ctx.scheme().verify_open(pk_, cells_[opens[k].pos],
                                    Bytes{static_cast<uint8_t>(opens[k].bit ? 1 : 0)},
                                    opens[k].randomizer)) {
        finish(Bytes{kJudgeAbort});
        return out;
      }
      revealed[k] = opens[k].bit;
    }
    finish(Bytes{p_.enc->judge(x_, s_, revealed) ? kJudgeSuccess : kJudgeAbort});
    return out;
  }
  abort_party();
  return out;
}

std::vector<Frame> ZkpkGuessingProver::step(const Frame* in, SessionCtx& ctx) {
  if (done_) return {};
  std::vector<Frame> out;
  if (phase_ == 0) {
    key_flip_ = CoinSlot(p_.key_flip(0, p_.kappa_bits, side_, rng_));
    phase_ = 1;
  }
  if (phase_ == 1) {
    DriveStep d = drive_coin(key_flip_, in, ctx);
    append_frames(out, d.frames);
    if (!d.finished) {
      if (d.leftover) abort_party();
      return out;
    }
    in = d.leftover;
    const Outcome& kb = key_flip_->result();
    if (!kb) {
      abort_party();
      return out;
    }
    pk_ = ctx.scheme().key_from_bits(*kb);
    // guess the challenge, plant simulated bits there, uniform bits elsewhere
    size_t nbits = p_.enc->code_bits(x_);
    Bytes guess = rng_.bits(p_.enc->challenge_bits());
    e_ = rng_.bits(nbits);
    std::vector<uint32_t> sel = p_.enc->select(x_, guess);
    std::vector<bool> planted = p_.enc->simulate(x_, guess, rng_);
    for (size_t k = 0; k < sel.size(); ++k) set_bit(e_, sel[k], planted[k]);
    auto frames = commit_encoding(e_, nbits, pk_, ctx, rng_, randomizers_, x_);
    append_frames(out, frames);
    challenge_flip_ = CoinSlot(p_.challenge_flip(1, p_.enc->challenge_bits(), side_, rng_));
    phase_ = 2;
  }
  if (phase_ == 2) {
    DriveStep d = drive_coin(challenge_flip_, in, ctx);
    append_frames(out, d.frames);
    if (!d.finished) {
      if (d.leftover) abort_party();
      return out;
    }
    const Outcome& sc = challenge_flip_->result();
    if (!sc) {
      abort_party();
      return out;
    }
    out.push_back(Frame{"OPENS", encode_bit_opens(p_.enc->select(x_, *sc), e_, randomizers_)});
    finish(Bytes{kJudgeSuccess});
    return out;
  }
  abort_party();
  return out;
}

// ---------------------------------------------------------------------------
// Runs and simulators

ZkpkParams make_zkpk_params(std::shared_ptr<const WitnessEncoding> enc, Relation rel,
                            size_t kappa_bits, bool composed) {
  ZkpkParams p;
  p.enc = std::move(enc);
  p.rel = std::move(rel);
  p.kappa_bits = kappa_bits;
  if (composed) {
    p.key_flip = composed_strong_flip_planner(kappa_bits);
    p.challenge_flip = composed_strong_flip_planner(kappa_bits);
  } else {
    p.key_flip = hybrid_planner();
    p.challenge_flip = hybrid_planner();
  }
  return p;
}

CoinPlanner composed_strong_flip_planner(size_t kappa_bits) {
  return [kappa_bits](uint32_t id, size_t nbits, Side role, Rng& rng) -> std::unique_ptr<CoinDriver> {
    // pick share parameters whose outcome length covers nbits
    uint32_t width = (nbits % 16 == 0) ? 16 : 8;
    uint32_t sigma = static_cast<uint32_t>((nbits + width - 1) / width);
    SssParams sss(sigma, FieldSpec::gf2ext(width));
    StrongFlipParams sub = make_strong_flip_params(sss, kappa_bits, /*composed=*/true);
    Rng sub_rng(rng.next_u64());
    std::unique_ptr<Party> party;
    if (role == Side::A)
      party = std::make_unique<StrongFlipAlice>(role, std::move(sub), sub_rng);
    else
      party = std::make_unique<StrongFlipBob>(role, std::move(sub), sub_rng);
    return std::make_unique<ComposedCoinDriver>(id, nbits, std::move(party));
  };
}

ZkpkRun zkpk_run(const SessionConfig& cfg, const ZkpkParams& p, const Bytes& x, const Bytes& w) {
  Session sess(cfg);
  auto prover = std::make_unique<ZkpkProver>(Side::A, p, x, w, sess.party_rng(Side::A));
  auto verifier = std::make_unique<ZkpkVerifier>(Side::B, p, sess.party_rng(Side::B));
  ZkpkRun run;
  run.transcript = sess.run(*prover, *verifier);
  run.aborted = !run.transcript.out_a.has_value() || !run.transcript.out_b.has_value();
  if (run.transcript.out_a && !run.transcript.out_a->empty())
    run.prover_judgment = (*run.transcript.out_a)[0];
  if (run.transcript.out_b && !run.transcript.out_b->empty())
    run.verifier_judgment = (*run.transcript.out_b)[0];
  return run;
}

namespace {

// Verifier with the extraction capability of the knowledge simulator.
class ExtractingVerifier : public ZkpkVerifier {
 public:
  ExtractingVerifier(Side side, ZkpkParams p, Rng rng, ExtractionKey sk)
      : ZkpkVerifier(side, std::move(p), rng), sk_(std::move(sk)) {}
  std::unique_ptr<Party> clone() const override { return std::make_unique<ExtractingVerifier>(*this); }

  const Bytes& extracted() const { return e_; }

 private:
  void saw_cells(const std::vector<BaseCommitment>& cells, SessionCtx& ctx) override {
    e_.assign(bytes_for_bits(cells.size()), 0);
    for (size_t i = 0; i < cells.size(); ++i) {
      Bytes m = ctx.scheme().xtr(cells[i], sk_);
      set_bit(e_, i, m.size() == 1 && m[0] == 1);
    }
  }

  ExtractionKey sk_;
  Bytes e_;
};

}  // namespace

ExtractSimResult zkpk_extract_simulator(const PartyFactory& prover, const Relation& rel,
                                        const SessionConfig& cfg, const ZkpkParams& p) {
  Session sess(cfg);
  Rng sim_rng(mix_seed(cfg.seed, 17));
  KeyPair kp = sess.scheme().gen_binding(sim_rng);
  sess.registry().force_coin(0, kp.pk.bits);
  auto adv = prover(Side::A, sess.party_rng(Side::A));
  auto sim = std::make_unique<ExtractingVerifier>(Side::B, p, sess.party_rng(Side::B), kp.sk);
  ExtractingVerifier* sim_ptr = sim.get();
  Transcript t = sess.run(*adv, *sim);

  ExtractSimResult res;
  res.transcript_accept =
      t.out_b && !t.out_b->empty() && (*t.out_b)[0] == kJudgeSuccess;
  res.prover_aborted = !t.out_b || sim_ptr->instance().empty();
  // the ideal functionality judges the decoded witness; a prover that never
  // delivered an encoding counts as submitting a non-witness
  IdealZkpk ideal{rel.holds};
  if (!res.prover_aborted && sim_ptr->extracted().size() * 8 >= p.enc->code_bits(sim_ptr->instance())) {
    res.extracted_witness = p.enc->decode(sim_ptr->instance(), sim_ptr->extracted());
    res.ideal_success = ideal.run(sim_ptr->instance(), res.extracted_witness).second;
  } else {
    res.ideal_success = false;
  }
  return res;
}

namespace {

// Prover seat of the zero-knowledge simulator: knows the instance only.
class SimulatingProver : public Party {
 public:
  SimulatingProver(Side side, ZkpkParams p, Bytes x, Bytes challenge, Rng rng)
      : Party(side), p_(std::move(p)), x_(std::move(x)), s_(std::move(challenge)), rng_(rng) {}
  std::unique_ptr<Party> clone() const override { return std::make_unique<SimulatingProver>(*this); }

  const std::vector<uint32_t>& revealed_positions() const { return positions_; }
  const std::vector<bool>& revealed_bits() const { return planted_; }

  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override {
    if (done_) return {};
    std::vector<Frame> out;
    if (phase_ == 0) {
      key_flip_ = CoinSlot(p_.key_flip(0, p_.kappa_bits, side_, rng_));
      phase_ = 1;
    }
    if (phase_ == 1) {
      DriveStep d = drive_coin(key_flip_, in, ctx);
      append_frames(out, d.frames);
      if (!d.finished) {
        if (d.leftover) abort_party();
        return out;
      }
      in = d.leftover;
      const Outcome& kb = key_flip_->result();
      if (!kb) {
        abort_party();
        return out;
      }
      pk_ = ctx.scheme().key_from_bits(*kb);
      size_t nbits = p_.enc->code_bits(x_);
      positions_ = p_.enc->select(x_, s_);
      planted_ = p_.enc->simulate(x_, s_, rng_);
      e_ = rng_.bits(nbits);  // unopened positions hold uniform bits
      for (size_t k = 0; k < positions_.size(); ++k) set_bit(e_, positions_[k], planted_[k]);
      auto frames = commit_encoding(e_, nbits, pk_, ctx, rng_, randomizers_, x_);
      append_frames(out, frames);
      challenge_flip_ = CoinSlot(p_.challenge_flip(1, p_.enc->challenge_bits(), side_, rng_));
      phase_ = 2;
    }
    if (phase_ == 2) {
      DriveStep d = drive_coin(challenge_flip_, in, ctx);
      append_frames(out, d.frames);
      if (!d.finished) {
        if (d.leftover) abort_party();
        return out;
      }
      const Outcome& sc = challenge_flip_->result();
      if (!sc || *sc != s_) {
        // challenge enforcement failed
        abort_party();
        return out;
      }
      out.push_back(Frame{"OPENS", encode_bit_opens(positions_, e_, randomizers_)});
      finish(Bytes{kJudgeSuccess});
      return out;
    }
    abort_party();
    return out;
  }


 private:
  ZkpkParams p_;
  Bytes x_, s_;
  Rng rng_;
  int phase_ = 0;
  CoinSlot key_flip_, challenge_flip_;
  MixedKey pk_;
  Bytes e_;
  std::vector<Bytes> randomizers_;
  std::vector<uint32_t> positions_;
  std::vector<bool> planted_;
};

}  // namespace

ZkSimResult zkpk_zk_simulator(const PartyFactory& verifier, const Bytes& x,
                              const SessionConfig& cfg, const ZkpkParams& p) {
  Session sess(cfg);
  Rng sim_rng(mix_seed(cfg.seed, 19));
  Bytes challenge = sim_rng.bits(p.enc->challenge_bits());
  sess.registry().force_coin(1, challenge);
  auto sim = std::make_unique<SimulatingProver>(Side::A, p, x, challenge, sess.party_rng(Side::A));
  SimulatingProver* sim_ptr = sim.get();
  auto adv = verifier(Side::B, sess.party_rng(Side::B));
  ZkSimResult res;
  res.transcript = sess.run(*sim, *adv);
  res.forced_challenge = challenge;
  if (res.transcript.out_b && !res.transcript.out_b->empty())
    res.verifier_judgment = (*res.transcript.out_b)[0];
  res.revealed_positions = sim_ptr->revealed_positions();
  res.revealed_bits = sim_ptr->revealed_bits();
  return res;
}

}  // namespace scf
