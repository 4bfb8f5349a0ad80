#pragma once

#include "scf/zkpk.hpp"

namespace scf {

// ---------------------------------------------------------------------------
// Oblivious transfer from the dual-flavor keys: the receiver samples one
// binding key pair and one hiding key, placed by the choice bit; the sender
// commits each message under the corresponding key; the receiver extracts the
// chosen one, while the other stays statistically hidden.

class OtSender : public Party {
 public:
  OtSender(Side side, Bytes m0, Bytes m1, Rng rng)
      : Party(side), m0_(std::move(m0)), m1_(std::move(m1)), rng_(rng) {
    if (m0_.size() != m1_.size()) throw std::invalid_argument("ot: message lengths differ");
  }
  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override { return std::make_unique<OtSender>(*this); }

 private:
  Bytes m0_, m1_;
  Rng rng_;
  int phase_ = 0;
};

class OtReceiver : public Party {
 public:
  OtReceiver(Side side, bool choice, size_t msg_len, Rng rng)
      : Party(side), choice_(choice), msg_len_(msg_len), rng_(rng) {}
  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override { return std::make_unique<OtReceiver>(*this); }

 private:
  bool choice_;
  size_t msg_len_;
  Rng rng_;
  int phase_ = 0;
  ExtractionKey sk_;
};

struct OtRun {
  Transcript transcript;
  Outcome received;  // receiver's output
};

OtRun ot_run(const SessionConfig& cfg, const Bytes& m0, const Bytes& m1, bool choice);

// ---------------------------------------------------------------------------
// Passively secure two-party protocols behind a pluggable interface. A
// protocol is a deterministic next-message function of (own input, own
// randomness, messages so far); honest runs terminate with a common output.

class PassiveProtocol {
 public:
  virtual ~PassiveProtocol() = default;

  virtual std::string name() const = 0;
  virtual size_t input_len() const = 0;  // bytes, per party
  virtual size_t rand_bits(Side role) const = 0;
  virtual size_t num_messages() const = 0;
  virtual Side mover(size_t k) const = 0;

  virtual Bytes next_message(Side role, const Bytes& x, const Bytes& r,
                             const std::vector<Bytes>& transcript, CommitScheme& scheme) const = 0;
  virtual Bytes output(Side role, const Bytes& x, const Bytes& r,
                       const std::vector<Bytes>& transcript, CommitScheme& scheme) const = 0;

  // The toy instances are input-determined, so the peer's messages in an
  // ideal-world simulation follow from (x1, r1) and the final output alone.
  virtual Bytes simulate_peer_message(size_t k, const Bytes& x1, const Bytes& r1, const Bytes& y,
                                      const std::vector<Bytes>& transcript, Rng& rng,
                                      CommitScheme& scheme) const = 0;

  // reference evaluation for tests and the ideal functionality
  virtual Bytes evaluate(const Bytes& x1, const Bytes& x2) const = 0;
};

// f(x1, x2) = x1 xor x2 on fixed-length byte strings; two plain messages.
std::shared_ptr<const PassiveProtocol> passive_xor(size_t len);

// f(a, b) = a AND b on single bits, built from one embedded oblivious
// transfer: the sender feeds (0, a), the receiver selects with b, the result
// is opened to both.
std::shared_ptr<const PassiveProtocol> passive_and_via_ot();

// ---------------------------------------------------------------------------
// Active-security compiler: commit to inputs and randomness shares with
// proofs of knowledge, fix the working randomness by public coins, then run
// the passive protocol with a consistency proof per message.

struct SfeParams {
  std::shared_ptr<const PassiveProtocol> f;
  size_t kappa_bits = 0;
  CoinPlanner coins;  // key flip id 0, randomness flips ids 1 and 2
};

SfeParams make_sfe_params(std::shared_ptr<const PassiveProtocol> f, size_t kappa_bits,
                          bool composed);

// zkpk instance ids inside an SFE session
constexpr uint32_t kSfeProofInputA = 100;
constexpr uint32_t kSfeProofInputB = 101;
constexpr uint32_t kSfeProofRandA = 102;
constexpr uint32_t kSfeProofRandB = 103;
constexpr uint32_t kSfeProofMsgBase = 200;

// Statement/witness encodings shared by the parties, the relation, and the
// simulator.
Bytes sfe_statement(Side role, const MixedKey& pk, const BaseCommitment& X, const BaseCommitment& S,
                    const Bytes& s_prime, const std::vector<Bytes>& transcript, const Bytes& m);
Bytes sfe_witness(const Bytes& x, const Bytes& r_input, const Bytes& s, const Bytes& r_rand);

// Witness opens both commitments and recomputing the next message from the
// committed input and derived randomness yields exactly the candidate m.
Relation sfe_consistency_relation(std::shared_ptr<const PassiveProtocol> f, CommitScheme* scheme);

// Witness is an opening of the named commitment.
Relation commitment_opening_relation(CommitScheme* scheme);

enum class SfeDeviation {
  None,
  FlipInnerMessage,    // first own inner message gets a flipped bit
  WrongRandomness,     // run the passive protocol on fresh randomness
  SubstituteInput,     // run the passive protocol on a different input
};

class SfeParty : public Party {
 public:
  SfeParty(Side side, SfeParams p, Bytes input, Rng rng, SfeDeviation dev = SfeDeviation::None)
      : Party(side), p_(std::move(p)), x_(std::move(input)), rng_(rng), deviation_(dev) {}
  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override { return std::make_unique<SfeParty>(*this); }

 private:
  std::vector<Frame> advance(const Frame* in, SessionCtx& ctx);
  bool check_peer_proof(uint32_t proof_id, const Bytes& expected_statement, SessionCtx& ctx);
  Bytes working_input() const;
  Bytes working_rand() const;
  std::vector<Frame> send_inner_or_finish(SessionCtx& ctx);

  SfeParams p_;
  Bytes x_;
  Rng rng_;
  SfeDeviation deviation_;
  int phase_ = 0;
  CoinSlot key_flip_, rand_flip_;
  MixedKey pk_;
  BaseCommitment my_x_cmt_, peer_x_cmt_;
  BaseCommitment my_s_cmt_, peer_s_cmt_;
  Bytes r_input_, r_rand_;       // commitment randomizers
  Bytes s_;                      // committed randomness share
  Bytes my_s_prime_, peer_s_prime_;
  Bytes wrong_rand_, wrong_input_;  // deviation material
  std::vector<Bytes> inner_;     // inner transcript
  size_t next_msg_ = 0;
};

struct SfeRun {
  Transcript transcript;
  Outcome out_a, out_b;
};

SfeRun run_sfe_session(const SessionConfig& cfg, const SfeParams& p, const Bytes& x1,
                       const Bytes& x2, SfeDeviation alice_deviation = SfeDeviation::None);

// Ideal-world simulator against a (possibly deviating) Alice: learns her
// input and randomness share from the proofs of knowledge, queries the ideal
// evaluation, forces her working randomness via the public coin, derives
// Bob's messages from the passive-protocol simulator, and cross-checks every
// message she sends.
struct SfeSimResult {
  Transcript transcript;
  Outcome ideal_bob_output;  // y or abort, as decided by the second input
  Bytes extracted_input;
};

using SfeAliceFactory = std::function<std::unique_ptr<Party>(Side side, Rng rng)>;

SfeSimResult sfe_simulate_alice(const SfeAliceFactory& alice, const SfeParams& p, const Bytes& x2,
                                const SessionConfig& cfg);

}  // namespace scf
