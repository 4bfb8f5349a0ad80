#pragma once

#include <memory>

#include "scf/coinflip.hpp"

namespace scf {

// Binary relation with a serialized-instance interface.
struct Relation {
  std::string name;
  RelationFn holds;  // total predicate on (instance, witness)
};

// Witness encoding: an encoder E mapping (x, w) to an n-bit string, a
// decoder D, a challenge-indexed position selector S, a judgment J that
// inspects only the selected bits, and a simulator producing those bits from
// the instance alone. Completeness, extractability (any encoding passing two
// distinct challenges decodes to a witness) and simulatability (selected bits
// of honest encodings are distributed like simulated ones) are each verified
// by the test suite.
class WitnessEncoding {
 public:
  virtual ~WitnessEncoding() = default;

  virtual size_t challenge_bits() const = 0;                 // sigma
  virtual size_t code_bits(const Bytes& x) const = 0;        // n
  virtual size_t randomness_bits(const Bytes& x) const = 0;  // m

  virtual Bytes encode(const Bytes& x, const Bytes& w, Rng& rng) const = 0;
  // total; returns a sentinel non-witness when no copy decodes
  virtual Bytes decode(const Bytes& x, const Bytes& e) const = 0;
  // 0-based positions, strictly increasing
  virtual std::vector<uint32_t> select(const Bytes& x, const Bytes& s) const = 0;
  // bits given in select() order
  virtual bool judge(const Bytes& x, const Bytes& s, const std::vector<bool>& revealed) const = 0;
  virtual std::vector<bool> simulate(const Bytes& x, const Bytes& s, Rng& rng) const = 0;
};

// ---------------------------------------------------------------------------
// Graph-isomorphism base instance (one-bit challenge): the encoding carries
// H = pi(G0), the permutation pi, and rho = pi o phi^-1 (so H = rho(G1)).
// Challenge 0 reveals (H, pi), challenge 1 reveals (H, rho); both together
// yield the witness phi = rho^-1 o pi.

struct GraphIsoInstance {
  uint32_t v = 0;
  std::vector<uint8_t> g0;  // v*v adjacency, row-major
  std::vector<uint8_t> g1;

  Bytes serialize() const;
  static GraphIsoInstance deserialize(const Bytes& b);
};

using Permutation = std::vector<uint32_t>;

bool is_permutation(const Permutation& p);
Permutation random_permutation(uint32_t v, Rng& rng);
Permutation invert_permutation(const Permutation& p);
Permutation compose_permutations(const Permutation& f, const Permutation& g);  // f after g
std::vector<uint8_t> apply_permutation(const std::vector<uint8_t>& adj, uint32_t v,
                                       const Permutation& p);

Bytes serialize_permutation(const Permutation& p);
std::optional<Permutation> deserialize_permutation(const Bytes& b, uint32_t v);

// witness predicate: G1 = phi(G0)
Relation graph_iso_relation();

// Random instance with a planted witness.
std::pair<GraphIsoInstance, Permutation> random_gi_instance(uint32_t v, double edge_density,
                                                            Rng& rng);

// Structured-text instance files: vertex count, adjacency rows of both
// graphs, optionally the witness permutation.
std::string gi_instance_to_text(const GraphIsoInstance& x, const Permutation* witness = nullptr);
std::pair<GraphIsoInstance, std::optional<Permutation>> gi_instance_from_text(
    const std::string& text);

std::shared_ptr<const WitnessEncoding> gi_encoding(uint32_t v);

// Deterministic encoder used by the exhaustive distribution checks.
Bytes gi_encode_with_permutation(const GraphIsoInstance& x, const Permutation& phi,
                                 const Permutation& pi);
std::vector<bool> gi_simulate_with_permutation(const GraphIsoInstance& x, bool challenge,
                                               const Permutation& tau);

// sigma-fold parallel repetition; the decoder needs the relation to pick the
// copy that actually decodes to a witness.
std::shared_ptr<const WitnessEncoding> parallel_repeat(std::shared_ptr<const WitnessEncoding> base,
                                                       size_t sigma, Relation rel);

// ---------------------------------------------------------------------------
// Proof protocol: key flip, per-bit commitments to the encoding, challenge
// flip, openings on the selected positions, judgment.

struct ZkpkParams {
  std::shared_ptr<const WitnessEncoding> enc;
  Relation rel;
  size_t kappa_bits = 0;
  CoinPlanner key_flip;        // invocation 0
  CoinPlanner challenge_flip;  // invocation 1
};

ZkpkParams make_zkpk_params(std::shared_ptr<const WitnessEncoding> enc, Relation rel,
                            size_t kappa_bits, bool composed);

// Judgment byte: 1 = success, 0 = abort.
constexpr uint8_t kJudgeSuccess = 1;
constexpr uint8_t kJudgeAbort = 0;

class ZkpkProver : public Party {
 public:
  ZkpkProver(Side side, ZkpkParams p, Bytes x, Bytes w, Rng rng)
      : Party(side), p_(std::move(p)), x_(std::move(x)), w_(std::move(w)), rng_(rng) {}
  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override { return std::make_unique<ZkpkProver>(*this); }

 private:
  ZkpkParams p_;
  Bytes x_, w_;
  Rng rng_;
  int phase_ = 0;
  CoinSlot key_flip_, challenge_flip_;
  MixedKey pk_;
  Bytes e_;
  std::vector<Bytes> randomizers_;
};

class ZkpkVerifier : public Party {
 public:
  ZkpkVerifier(Side side, ZkpkParams p, Rng rng) : Party(side), p_(std::move(p)), rng_(rng) {}
  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override { return std::make_unique<ZkpkVerifier>(*this); }

  const Bytes& instance() const { return x_; }

 protected:
  // extraction hook for the knowledge simulator (no-op for the honest verifier)
  virtual void saw_cells(const std::vector<BaseCommitment>&, SessionCtx&) {}

  ZkpkParams p_;
  Rng rng_;
  int phase_ = 0;
  CoinSlot key_flip_, challenge_flip_;
  MixedKey pk_;
  Bytes x_;
  std::vector<BaseCommitment> cells_;
  Bytes s_;
};

// Prover without a witness: guesses the challenge, pads the simulated bits
// with uniform ones, and wins exactly when the flip hits the guess.
class ZkpkGuessingProver : public Party {
 public:
  ZkpkGuessingProver(Side side, ZkpkParams p, Bytes x, Rng rng)
      : Party(side), p_(std::move(p)), x_(std::move(x)), rng_(rng) {}
  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override {
    return std::make_unique<ZkpkGuessingProver>(*this);
  }

 private:
  ZkpkParams p_;
  Bytes x_;
  Rng rng_;
  int phase_ = 0;
  CoinSlot key_flip_, challenge_flip_;
  MixedKey pk_;
  Bytes e_;
  std::vector<Bytes> randomizers_;
};

struct ZkpkRun {
  Transcript transcript;
  uint8_t prover_judgment = kJudgeAbort;    // from out_a
  uint8_t verifier_judgment = kJudgeAbort;  // from out_b
  bool aborted = false;                     // session-level abort
};

ZkpkRun zkpk_run(const SessionConfig& cfg, const ZkpkParams& p, const Bytes& x, const Bytes& w);

// Knowledge simulator on the verifier seat: forces the key flip to a binding
// key, extracts the committed encoding, submits the decoded witness to the
// ideal functionality, and otherwise follows the protocol.
struct ExtractSimResult {
  bool transcript_accept = false;  // judgment of the simulated verifier
  bool ideal_success = false;      // judgment of the ideal functionality
  bool prover_aborted = false;
  Bytes extracted_witness;
};

ExtractSimResult zkpk_extract_simulator(const PartyFactory& prover, const Relation& rel,
                                        const SessionConfig& cfg, const ZkpkParams& p);

// Zero-knowledge simulator on the prover seat: samples the challenge first,
// commits to simulated bits on the selected positions and uniform bits
// elsewhere, forces the challenge flip, opens the selected positions.
struct ZkSimResult {
  Transcript transcript;
  uint8_t verifier_judgment = kJudgeAbort;
  Bytes forced_challenge;
  std::vector<uint32_t> revealed_positions;
  std::vector<bool> revealed_bits;
};

ZkSimResult zkpk_zk_simulator(const PartyFactory& verifier, const Bytes& x,
                              const SessionConfig& cfg, const ZkpkParams& p);

// Composed-mode planner: a full two-sided enforceable flip (share-commitment
// construction over a byte-aligned binary field), truncated to the requested
// number of bits.
CoinPlanner composed_strong_flip_planner(size_t kappa_bits);

}  // namespace scf
