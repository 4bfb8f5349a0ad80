#pragma once

#include <map>
#include <memory>

#include "scf/bytes.hpp"
#include "scf/rng.hpp"

namespace scf {

enum class BackendId { Ideal, Lwe };

const char* backend_name(BackendId id);
BackendId parse_backend(const std::string& s);

// Public key of a mixed commitment scheme. The two key flavors are
// indistinguishable by inspection; whether a key is binding is only known to
// whoever holds the paired extraction key.
struct MixedKey {
  Bytes bits;
  BackendId backend = BackendId::Ideal;

  bool operator==(const MixedKey&) const = default;
};

struct ExtractionKey {
  MixedKey pk;
  Bytes secret;
};

struct KeyPair {
  MixedKey pk;
  ExtractionKey sk;
};

using BaseCommitment = Bytes;

struct Opening {
  Bytes message;
  Bytes randomizer;
};

// Dual-flavor commitment scheme: commit is a deterministic function of
// (pk, m, r); keys from gen_hiding make it statistically hiding, keys from
// gen_binding make it extractable via the paired secret.
class CommitScheme {
 public:
  virtual ~CommitScheme() = default;

  virtual BackendId id() const = 0;
  virtual size_t key_bits() const = 0;
  virtual size_t randomizer_len(size_t message_len) const = 0;

  virtual MixedKey gen_hiding(Rng& rng) = 0;
  virtual KeyPair gen_binding(Rng& rng) = 0;

  // Interpret an externally produced bit string (e.g. a coin-flip outcome) as
  // a public key. Almost all such keys are of the hiding flavor.
  MixedKey key_from_bits(Bytes bits) const;

  virtual BaseCommitment commit(const MixedKey& pk, const Bytes& m, const Bytes& r) = 0;

  // Accept iff C = commit(pk, m, r) bit-exactly.
  bool verify_open(const MixedKey& pk, const BaseCommitment& c, const Bytes& m, const Bytes& r);

  // Total: returns the committed message for honestly formed commitments under
  // the paired key, and some message (never a crash) otherwise.
  virtual Bytes xtr(const BaseCommitment& c, const ExtractionKey& sk) = 0;

  // Upper bound on the statistical distance between gen_hiding keys and
  // uniform key_bits-bit strings, as reported by the backend.
  virtual double hiding_uniformity_bound() const = 0;
};

// In-process idealization: keys are uniform strings, commitments are opaque
// ledger handles assigned in call order. A handle carries no information
// about the message (perfect hiding under every key) while the ledger pins
// each (pk, m, r) to one handle (perfect binding, extraction by lookup).
// One ledger per session; never shared across sessions.
class IdealScheme : public CommitScheme {
 public:
  explicit IdealScheme(size_t kappa_bits = 128);

  BackendId id() const override { return BackendId::Ideal; }
  size_t key_bits() const override { return kappa_; }
  size_t randomizer_len(size_t) const override { return 16; }

  MixedKey gen_hiding(Rng& rng) override;
  KeyPair gen_binding(Rng& rng) override;
  BaseCommitment commit(const MixedKey& pk, const Bytes& m, const Bytes& r) override;
  Bytes xtr(const BaseCommitment& c, const ExtractionKey& sk) override;
  double hiding_uniformity_bound() const override { return 0.0; }

  size_t binding_registry_size() const { return binding_keys_.size(); }

 private:
  struct Entry {
    Bytes pk;
    Bytes message;
    Bytes randomizer;
  };

  size_t kappa_;
  uint64_t next_handle_ = 1;
  std::map<std::pair<Bytes, std::pair<Bytes, Bytes>>, uint64_t> handle_of_;
  std::map<uint64_t, Entry> entries_;
  std::map<Bytes, Bytes> binding_keys_;  // pk bits -> secret token
};

// Regev-style lattice backend in multi-bit form; one ciphertext per message
// bit. Binding keys are real key pairs (A, As + e); hiding keys are uniform
// bit strings, decoded into matrix form modulo q on use. Parameters are desk
// scale and not production-secure.
struct LweParams {
  uint32_t n = 64;          // secret dimension
  uint32_t q = 7681;        // modulus
  uint32_t m_samples = 1024;  // rows; sized for the leftover-hash regime
  uint32_t noise_bound = 1;   // per-sample noise magnitude

  uint32_t value_bits() const;  // bits per mod-q value in serialized keys
  size_t key_bits() const;
  void validate() const;
};

class LweScheme : public CommitScheme {
 public:
  explicit LweScheme(LweParams params = {});

  BackendId id() const override { return BackendId::Lwe; }
  size_t key_bits() const override { return params_.key_bits(); }
  // one subset-selection bit per matrix row per message bit
  size_t randomizer_len(size_t message_len) const override;

  MixedKey gen_hiding(Rng& rng) override;
  KeyPair gen_binding(Rng& rng) override;
  BaseCommitment commit(const MixedKey& pk, const Bytes& m, const Bytes& r) override;
  Bytes xtr(const BaseCommitment& c, const ExtractionKey& sk) override;
  // covers the wrapped decoding of 13-bit chunks into mod-q values
  double hiding_uniformity_bound() const override;

  const LweParams& params() const { return params_; }

 private:
  LweParams params_;
  // last decoded public key; commits under one key dominate, so one slot is enough
  Bytes cached_key_bits_;
  std::vector<uint16_t> cached_matrix_;
};

std::unique_ptr<CommitScheme> make_scheme(BackendId id, size_t ideal_kappa = 128);

// Key length a scheme of this configuration will use, without instantiating it.
size_t scheme_key_bits(BackendId id, size_t ideal_kappa = 128);

}  // namespace scf
