#pragma once

#include "scf/string_commit.hpp"

namespace scf {

// Security flavor of one side of a coin-flip: uncontrollable (cannot hit
// negligible subsets), random (cannot exceed the uniform probability of any
// string), enforceable (a simulator can steer the outcome).
enum class Flavor { Uncontrollable, Random, Enforceable };

struct FlavorPair {
  Flavor alice = Flavor::Uncontrollable;
  Flavor bob = Flavor::Uncontrollable;
  bool operator==(const FlavorPair&) const = default;
};

const char* flavor_name(Flavor f);

// ---------------------------------------------------------------------------
// Blum base protocol: per round, Alice commits to a bit, Bob replies with a
// bit in the clear, Alice opens, the round coin is the XOR. nbits sequential
// rounds produce an nbits-string; one abort aborts the whole string.

struct BlumParams {
  size_t nbits = 1;
};

class BlumAlice : public Party {
 public:
  BlumAlice(Side side, BlumParams p, Rng rng) : Party(side), p_(p), rng_(rng) {}
  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override { return std::make_unique<BlumAlice>(*this); }

 private:
  Frame make_commit(SessionCtx& ctx);

  BlumParams p_;
  Rng rng_;
  int phase_ = 0;
  size_t round_ = 0;
  MixedKey pk_;
  uint8_t a_ = 0;
  Bytes r_;
  Bytes coins_;
};

class BlumBob : public Party {
 public:
  BlumBob(Side side, BlumParams p, Rng rng) : Party(side), p_(p), rng_(rng) {}
  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override { return std::make_unique<BlumBob>(*this); }

 private:
  BlumParams p_;
  Rng rng_;
  int phase_ = 0;
  size_t round_ = 0;
  MixedKey pk_;
  BaseCommitment cmt_;
  uint8_t b_ = 0;
  Bytes coins_;
};

// ---------------------------------------------------------------------------
// XOR-with-commitment amplification: a base flip yields the commitment key,
// Alice commits to her half before seeing Bob's. Enforceable against Alice
// (extract under a forced binding key), random for Bob (the commitment hides
// Alice's half under almost every key).

struct XorFlipParams {
  size_t ell_bits = 8;    // outcome length
  size_t kappa_bits = 0;  // base flip length; must equal the scheme's key size
  CoinPlanner base;       // invocation `base_coin_id`
  uint32_t base_coin_id = 0;
};

class XorFlipAlice : public Party {
 public:
  XorFlipAlice(Side side, XorFlipParams p, Rng rng) : Party(side), p_(std::move(p)), rng_(rng) {}
  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override { return std::make_unique<XorFlipAlice>(*this); }

 protected:
  // Adversary knobs: sample a (default uniform), decide whether to open given
  // the would-be outcome (default yes).
  virtual Bytes choose_a() { return rng_.bits(p_.ell_bits); }
  virtual bool willing_to_open(const Bytes& /*outcome*/) { return true; }

  XorFlipParams p_;
  Rng rng_;
  int phase_ = 0;
  CoinSlot base_;
  MixedKey pk_;
  Bytes a_, r_;
};

class XorFlipBob : public Party {
 public:
  XorFlipBob(Side side, XorFlipParams p, Rng rng) : Party(side), p_(std::move(p)), rng_(rng) {}
  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override { return std::make_unique<XorFlipBob>(*this); }

 protected:
  virtual Bytes choose_b(const BaseCommitment& /*cmt*/, SessionCtx&) { return rng_.bits(p_.ell_bits); }

  XorFlipParams p_;
  Rng rng_;
  int phase_ = 0;
  CoinSlot base_;
  MixedKey pk_;
  BaseCommitment cmt_;
  Bytes b_;
};

// Alice adversary that vetoes outcomes failing a predicate by refusing to
// open (she can only remove probability mass, never add).
class XorFlipAliceVeto : public XorFlipAlice {
 public:
  XorFlipAliceVeto(Side side, XorFlipParams p, Rng rng, std::function<bool(const Bytes&)> accept)
      : XorFlipAlice(side, std::move(p), rng), accept_(std::move(accept)) {}
  std::unique_ptr<Party> clone() const override { return std::make_unique<XorFlipAliceVeto>(*this); }

 private:
  bool willing_to_open(const Bytes& outcome) override { return accept_(outcome); }
  std::function<bool(const Bytes&)> accept_;
};

class XorFlipAliceFixed : public XorFlipAlice {
 public:
  XorFlipAliceFixed(Side side, XorFlipParams p, Rng rng, Bytes fixed_a)
      : XorFlipAlice(side, std::move(p), rng), fixed_(std::move(fixed_a)) {}
  std::unique_ptr<Party> clone() const override { return std::make_unique<XorFlipAliceFixed>(*this); }

 private:
  Bytes choose_a() override { return fixed_; }
  Bytes fixed_;
};

// Bob adversary that derives b from the commitment bytes it just saw.
class XorFlipBobDeriver : public XorFlipBob {
 public:
  using XorFlipBob::XorFlipBob;
  std::unique_ptr<Party> clone() const override { return std::make_unique<XorFlipBobDeriver>(*this); }

 private:
  Bytes choose_b(const BaseCommitment& cmt, SessionCtx&) override;
};

// Deliberately broken variant (negative control): Alice announces her half in
// the clear before Bob replies, so Bob steers the outcome wherever he wants.
class PlainFlipAlice : public Party {
 public:
  PlainFlipAlice(Side side, size_t ell_bits, Rng rng) : Party(side), ell_(ell_bits), rng_(rng) {}
  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override { return std::make_unique<PlainFlipAlice>(*this); }

 private:
  size_t ell_;
  Rng rng_;
  int phase_ = 0;
  Bytes a_;
};

class PlainFlipBobSteerer : public Party {
 public:
  PlainFlipBobSteerer(Side side, size_t ell_bits, Bytes target)
      : Party(side), ell_(ell_bits), target_(std::move(target)) {}
  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override {
    return std::make_unique<PlainFlipBobSteerer>(*this);
  }

 private:
  size_t ell_;
  Bytes target_;
  int phase_ = 0;
};

// ---------------------------------------------------------------------------
// Share-commitment amplification to enforceability on both sides: the key
// comes from a subordinate flip, Alice's half is committed cell-wise through
// the cut-and-choose commitment, the spot-check subset comes from a second
// subordinate flip with the roles reversed.

struct StrongFlipParams {
  SssParams sss;
  size_t kappa_bits = 0;
  CoinPlanner key_flip;     // invocation key_coin_id
  CoinPlanner subset_flip;  // invocation subset_coin_id
  uint32_t key_coin_id = 0;
  uint32_t subset_coin_id = 1;

  StrongFlipParams(SssParams s) : sss(s) {
    if (s.field.kind != FieldSpec::Kind::BinaryExtension || s.field.width % 8 != 0)
      throw std::invalid_argument(
          "StrongFlipParams: the xor step needs a binary field with byte-aligned width");
  }
  size_t ell_bits() const { return static_cast<size_t>(sss.sigma) * sss.field.width; }
};

class StrongFlipAlice : public Party {
 public:
  StrongFlipAlice(Side side, StrongFlipParams p, Rng rng) : Party(side), p_(std::move(p)), rng_(rng) {}
  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override { return std::make_unique<StrongFlipAlice>(*this); }

 protected:
  // Adversary knob: tamper with the commitment/announcement after the honest
  // state is prepared.
  virtual void tamper(SessionCtx&, StringCommitment&, ShareVector&) {}

  StrongFlipParams p_;
  Rng rng_;
  int phase_ = 0;
  CoinSlot key_flip_, subset_flip_;
  MixedKey pk_;
  CommitterState st_;
  ShareVector announced_;
  Bytes b_;
};

class StrongFlipBob : public Party {
 public:
  StrongFlipBob(Side side, StrongFlipParams p, Rng rng) : Party(side), p_(std::move(p)), rng_(rng) {}
  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override { return std::make_unique<StrongFlipBob>(*this); }

 protected:
  virtual Bytes choose_b(SessionCtx&) { return rng_.bits(p_.ell_bits()); }
  // Adversary knob: abort before sending b.
  virtual bool quit_after_cells() { return false; }

  StrongFlipParams p_;
  Rng rng_;
  int phase_ = 0;
  CoinSlot key_flip_, subset_flip_;
  MixedKey pk_;
  std::optional<StringCommitment> cells_;
  ShareVector announced_;
  std::optional<SubsetS> subset_;
  Bytes b_;
};

// Alice adversary: corrupts `bad_cells` commitments but announces the honest
// sharing (spot-check fails exactly on corrupted positions).
class StrongFlipAliceCorrupt : public StrongFlipAlice {
 public:
  StrongFlipAliceCorrupt(Side side, StrongFlipParams p, Rng rng, uint32_t bad_cells)
      : StrongFlipAlice(side, std::move(p), rng), bad_cells_(bad_cells) {}
  std::unique_ptr<Party> clone() const override {
    return std::make_unique<StrongFlipAliceCorrupt>(*this);
  }

 private:
  void tamper(SessionCtx& ctx, StringCommitment& M, ShareVector& announced) override;
  uint32_t bad_cells_;
};

// Alice adversary: commits honestly but announces the sharing of a different
// message (opening toward a codeword other than the committed one).
class StrongFlipAliceSwap : public StrongFlipAlice {
 public:
  using StrongFlipAlice::StrongFlipAlice;
  std::unique_ptr<Party> clone() const override { return std::make_unique<StrongFlipAliceSwap>(*this); }

 private:
  void tamper(SessionCtx& ctx, StringCommitment& M, ShareVector& announced) override;
};

class StrongFlipBobQuitter : public StrongFlipBob {
 public:
  using StrongFlipBob::StrongFlipBob;
  std::unique_ptr<Party> clone() const override { return std::make_unique<StrongFlipBobQuitter>(*this); }

 private:
  bool quit_after_cells() override { return true; }
};

// ---------------------------------------------------------------------------
// Composed-mode planners (the hybrid planner lives in the harness).

// Base flip realized by sequential Blum rounds; Alice of the enclosing
// protocol plays the committer.
CoinPlanner composed_blum_planner();

// Subordinate XOR-with-commitment flip (its own base is composed Blum).
// `swap_roles` selects which enclosing side plays the committer: false keeps
// Alice as committer (enforceable against Alice), true swaps the sides
// (enforceable against Bob).
CoinPlanner composed_xor_flip_planner(bool swap_roles, size_t kappa_bits);

// ---------------------------------------------------------------------------
// Enforcement simulators (hybrid-model: they own the subordinate flips).

struct EnforceStats {
  Outcome outcome;
  bool completed = false;  // non-abort
  bool hit_target = false;
  Transcript transcript;
};

using PartyFactory = std::function<std::unique_ptr<Party>(Side side, Rng rng)>;

// Simulator on Bob's seat against an adversarial Alice of the XOR flip:
// forces the base flip to a binding key, extracts her half, replies with the
// complement toward the target.
EnforceStats enforce_xor_flip_alice(const PartyFactory& alice, const Bytes& target,
                                    const SessionConfig& cfg, size_t ell_bits);

// Same seat for the share-commitment flip; extraction decodes the nearest
// codeword of the extracted cells.
EnforceStats enforce_strong_flip_alice(const PartyFactory& alice, const Bytes& target,
                                       const SessionConfig& cfg, const SssParams& sss);

// Simulator on Alice's seat against an adversarial Bob of the share-
// commitment flip: commits to a placeholder, derives her half from Bob's b
// and the target, opens equivocally under a pre-forced subset.
EnforceStats enforce_strong_flip_bob(const PartyFactory& bob, const Bytes& target,
                                     const SessionConfig& cfg, const SssParams& sss);

// ---------------------------------------------------------------------------
// Rewinding enforcement for the single-round Blum base (classical stand-in
// for enforcement against the committer; forbidden in quantum-realistic mode).

enum class RewindStrategy {
  // probe with b=0, then rewind once and send the bit that lands on target
  ExtractThenHit,
  // rewind with fresh uniform b until the outcome equals the target
  ResampleUntilHit,
};

struct RewindResult {
  Outcome outcome;  // 1-bit
  uint32_t attempts = 0;
};

RewindResult rewind_enforce_blum(const PartyFactory& committer, bool target,
                                 const SessionConfig& cfg, RewindStrategy strategy,
                                 uint32_t max_attempts = 256);

// ---------------------------------------------------------------------------
// Flavor measurement: fraction of all runs whose (non-abort) outcome lands in
// the designated subset.

struct UncontTestResult {
  uint64_t hits = 0;
  uint64_t completed = 0;
  uint64_t runs = 0;
  double hit_rate() const { return runs ? static_cast<double>(hits) / runs : 0.0; }
};

using OutcomeRunner = std::function<Outcome(uint64_t seed)>;

UncontTestResult flavor_test_uncont(const OutcomeRunner& runner, uint64_t n, uint64_t master_seed,
                                    const std::function<bool(const Bytes&)>& in_q,
                                    bool parallel = true);

// Convenience: honest session runners used all over the test suites.
Transcript run_blum_session(const SessionConfig& cfg, size_t nbits);
Transcript run_xor_flip_session(const SessionConfig& cfg, size_t ell_bits, bool composed);
Transcript run_strong_flip_session(const SessionConfig& cfg, const SssParams& sss, bool composed);

XorFlipParams make_xor_flip_params(size_t ell_bits, size_t kappa_bits, bool composed);
StrongFlipParams make_strong_flip_params(const SssParams& sss, size_t kappa_bits, bool composed);

}  // namespace scf
