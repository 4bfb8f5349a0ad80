#include "scf/mixed_commit.hpp"

#include <cmath>

namespace scf {

const char* backend_name(BackendId id) { return id == BackendId::Ideal ? "ideal" : "lwe"; }

BackendId parse_backend(const std::string& s) {
  if (s == "ideal") return BackendId::Ideal;
  if (s == "lwe") return BackendId::Lwe;
  throw std::invalid_argument("unknown backend: " + s);
}

MixedKey CommitScheme::key_from_bits(Bytes bits) const {
  if (bits.size() != bytes_for_bits(key_bits()))
    throw std::invalid_argument("key_from_bits: wrong length");
  return MixedKey{std::move(bits), id()};
}

bool CommitScheme::verify_open(const MixedKey& pk, const BaseCommitment& c, const Bytes& m,
                               const Bytes& r) {
  if (r.size() != randomizer_len(m.size())) return false;
  return commit(pk, m, r) == c;
}

// ---------------------------------------------------------------------------
// Ideal backend

IdealScheme::IdealScheme(size_t kappa_bits) : kappa_(kappa_bits) {
  if (kappa_ == 0 || kappa_ % 8 != 0) throw std::invalid_argument("IdealScheme: kappa must be a byte multiple");
}

MixedKey IdealScheme::gen_hiding(Rng& rng) { return MixedKey{rng.bytes(kappa_ / 8), BackendId::Ideal}; }

KeyPair IdealScheme::gen_binding(Rng& rng) {
  MixedKey pk{rng.bytes(kappa_ / 8), BackendId::Ideal};
  Bytes secret = rng.bytes(16);
  binding_keys_[pk.bits] = secret;
  return KeyPair{pk, ExtractionKey{pk, secret}};
}

BaseCommitment IdealScheme::commit(const MixedKey& pk, const Bytes& m, const Bytes& r) {
  if (pk.backend != BackendId::Ideal || pk.bits.size() != kappa_ / 8)
    throw std::invalid_argument("IdealScheme::commit: bad key");
  if (r.size() != randomizer_len(m.size())) throw std::invalid_argument("IdealScheme::commit: randomizer size");
  auto key = std::make_pair(pk.bits, std::make_pair(m, r));
  auto it = handle_of_.find(key);
  uint64_t handle;
  if (it != handle_of_.end()) {
    handle = it->second;
  } else {
    handle = next_handle_++;
    handle_of_.emplace(std::move(key), handle);
    entries_[handle] = Entry{pk.bits, m, r};
  }
  Bytes c;
  put_u64(c, handle);
  return c;
}

Bytes IdealScheme::xtr(const BaseCommitment& c, const ExtractionKey& sk) {
  if (c.size() != 8) return {};
  size_t pos = 0;
  uint64_t handle = read_u64(c, pos);
  auto it = entries_.find(handle);
  if (it == entries_.end()) return {};
  // extraction is only meaningful under the paired key; anything else yields a
  // fixed harmless value of the right length
  if (it->second.pk != sk.pk.bits) return Bytes(it->second.message.size(), 0);
  auto reg = binding_keys_.find(sk.pk.bits);
  if (reg == binding_keys_.end() || reg->second != sk.secret) return Bytes(it->second.message.size(), 0);
  return it->second.message;
}

// ---------------------------------------------------------------------------
// LWE backend

uint32_t LweParams::value_bits() const {
  uint32_t b = 1;
  while ((1u << b) < q) ++b;
  return b;
}

size_t LweParams::key_bits() const {
  return static_cast<size_t>(m_samples) * (n + 1) * value_bits();
}

void LweParams::validate() const {
  if (n == 0 || q < 4 || m_samples == 0) throw std::invalid_argument("LweParams: degenerate");
  // decryption rounds correctly when the accumulated noise stays below q/4
  if (static_cast<uint64_t>(noise_bound) * m_samples >= q / 4)
    throw std::invalid_argument("LweParams: noise can reach q/4, decryption would be unreliable");
}

LweScheme::LweScheme(LweParams params) : params_(params) { params_.validate(); }

size_t LweScheme::randomizer_len(size_t message_len) const {
  return message_len * params_.m_samples;  // m_samples selection bits per message bit
}

MixedKey LweScheme::gen_hiding(Rng& rng) {
  // a uniform bit string; its 13-bit chunks are read modulo q on use
  return MixedKey{rng.bits(params_.key_bits()), BackendId::Lwe};
}

namespace {

// row-major m x (n+1) matrix of mod-q values; last column holds b
using Matrix = std::vector<uint16_t>;

uint32_t read_packed(const Bytes& bits, size_t index, uint32_t width) {
  size_t bit0 = index * width;
  size_t byte0 = bit0 / 8;
  uint32_t window = 0;
  for (size_t k = 0; k < 4 && byte0 + k < bits.size(); ++k)
    window |= static_cast<uint32_t>(bits[byte0 + k]) << (8 * k);
  return (window >> (bit0 % 8)) & ((1u << width) - 1);
}

void write_packed(Bytes& bits, size_t index, uint32_t width, uint32_t value) {
  for (uint32_t k = 0; k < width; ++k) set_bit(bits, index * width + k, (value >> k) & 1);
}

Matrix decode_key(const LweParams& p, const Bytes& bits) {
  size_t count = static_cast<size_t>(p.m_samples) * (p.n + 1);
  Matrix mat(count);
  for (size_t i = 0; i < count; ++i)
    mat[i] = static_cast<uint16_t>(read_packed(bits, i, p.value_bits()) % p.q);
  return mat;
}

}  // namespace

KeyPair LweScheme::gen_binding(Rng& rng) {
  const LweParams& p = params_;
  std::vector<uint16_t> secret(p.n);
  for (auto& s : secret) s = static_cast<uint16_t>(rng.uniform(p.q));
  Matrix mat(static_cast<size_t>(p.m_samples) * (p.n + 1));
  for (uint32_t row = 0; row < p.m_samples; ++row) {
    uint64_t acc = 0;
    for (uint32_t col = 0; col < p.n; ++col) {
      uint16_t a = static_cast<uint16_t>(rng.uniform(p.q));
      mat[static_cast<size_t>(row) * (p.n + 1) + col] = a;
      acc += static_cast<uint64_t>(a) * secret[col];
    }
    // bounded noise in [-noise_bound, noise_bound]
    int64_t e = static_cast<int64_t>(rng.uniform(2 * p.noise_bound + 1)) - p.noise_bound;
    int64_t b = static_cast<int64_t>(acc % p.q) + e;
    b %= p.q;
    if (b < 0) b += p.q;
    mat[static_cast<size_t>(row) * (p.n + 1) + p.n] = static_cast<uint16_t>(b);
  }
  Bytes bits(bytes_for_bits(p.key_bits()));
  for (size_t i = 0; i < mat.size(); ++i) write_packed(bits, i, p.value_bits(), mat[i]);
  MixedKey pk{std::move(bits), BackendId::Lwe};
  Bytes sk_bytes;
  for (uint16_t s : secret) {
    sk_bytes.push_back(static_cast<uint8_t>(s));
    sk_bytes.push_back(static_cast<uint8_t>(s >> 8));
  }
  return KeyPair{pk, ExtractionKey{pk, sk_bytes}};
}

BaseCommitment LweScheme::commit(const MixedKey& pk, const Bytes& m, const Bytes& r) {
  const LweParams& p = params_;
  if (pk.backend != BackendId::Lwe || pk.bits.size() != bytes_for_bits(p.key_bits()))
    throw std::invalid_argument("LweScheme::commit: bad key");
  if (r.size() != randomizer_len(m.size())) throw std::invalid_argument("LweScheme::commit: randomizer size");
  if (cached_key_bits_ != pk.bits) {
    cached_matrix_ = decode_key(p, pk.bits);
    cached_key_bits_ = pk.bits;
  }
  const Matrix& mat = cached_matrix_;
  size_t nbits = m.size() * 8;
  Bytes out;
  put_u32(out, static_cast<uint32_t>(nbits));
  std::vector<uint32_t> acc(p.n + 1);
  for (size_t bit = 0; bit < nbits; ++bit) {
    std::fill(acc.begin(), acc.end(), 0u);
    // the randomizer picks the subset of rows to sum
    for (uint32_t row = 0; row < p.m_samples; ++row) {
      if (!get_bit(r, bit * p.m_samples + row)) continue;
      const uint16_t* base = &mat[static_cast<size_t>(row) * (p.n + 1)];
      for (uint32_t col = 0; col <= p.n; ++col) acc[col] += base[col];
    }
    uint32_t enc = get_bit(m, bit) ? p.q / 2 : 0;
    acc[p.n] += enc;
    for (uint32_t col = 0; col <= p.n; ++col) {
      uint16_t v = static_cast<uint16_t>(acc[col] % p.q);
      out.push_back(static_cast<uint8_t>(v));
      out.push_back(static_cast<uint8_t>(v >> 8));
    }
  }
  return out;
}

Bytes LweScheme::xtr(const BaseCommitment& c, const ExtractionKey& sk) {
  const LweParams& p = params_;
  size_t pos = 0;
  uint32_t nbits = 0;
  try {
    nbits = read_u32(c, pos);
  } catch (const ParseError&) {
    return {};
  }
  if (nbits % 8 != 0 || c.size() - pos != static_cast<size_t>(nbits) * (p.n + 1) * 2) return {};
  if (sk.secret.size() != static_cast<size_t>(p.n) * 2) return {};
  std::vector<uint16_t> secret(p.n);
  for (uint32_t i = 0; i < p.n; ++i)
    secret[i] = static_cast<uint16_t>(sk.secret[2 * i] | (sk.secret[2 * i + 1] << 8));
  Bytes out(nbits / 8, 0);
  for (uint32_t bit = 0; bit < nbits; ++bit) {
    const uint8_t* base = c.data() + pos + static_cast<size_t>(bit) * (p.n + 1) * 2;
    uint64_t dot = 0;
    for (uint32_t col = 0; col < p.n; ++col) {
      uint16_t a = static_cast<uint16_t>(base[2 * col] | (base[2 * col + 1] << 8));
      dot += static_cast<uint64_t>(a) * secret[col];
    }
    uint16_t b = static_cast<uint16_t>(base[2 * p.n] | (base[2 * p.n + 1] << 8));
    uint32_t diff = (b + p.q - static_cast<uint32_t>(dot % p.q)) % p.q;
    // nearer to q/2 than to 0 means an encoded one
    uint32_t dist0 = std::min(diff, p.q - diff);
    uint32_t dist1 = diff > p.q / 2 ? diff - p.q / 2 : p.q / 2 - diff;
    if (dist1 < dist0) set_bit(out, bit, true);
  }
  return out;
}

double LweScheme::hiding_uniformity_bound() const {
  // gen_hiding emits exactly uniform bit strings
  return 0.0;
}

std::unique_ptr<CommitScheme> make_scheme(BackendId id, size_t ideal_kappa) {
  if (id == BackendId::Ideal) return std::make_unique<IdealScheme>(ideal_kappa);
  return std::make_unique<LweScheme>();
}

size_t scheme_key_bits(BackendId id, size_t ideal_kappa) {
  if (id == BackendId::Ideal) return ideal_kappa;
  return LweParams{}.key_bits();
}

}  // namespace scf
