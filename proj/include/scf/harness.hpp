#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "scf/mixed_commit.hpp"
#include "scf/rng.hpp"

namespace scf {

enum class Side { A, B };

inline Side peer(Side s) { return s == Side::A ? Side::B : Side::A; }
inline char side_char(Side s) { return s == Side::A ? 'A' : 'B'; }

struct Frame {
  std::string tag;
  Bytes payload;
};

struct TranscriptFrame {
  uint32_t seq = 0;
  char sender = '?';  // 'A', 'B' or 'F' (ideal functionality)
  std::string tag;
  Bytes payload;

  bool operator==(const TranscriptFrame&) const = default;
};

// Ordered record of one two-party session: header, every frame, both local
// outputs. Append-only while the session runs, immutable afterwards; a rerun
// under the same seeds reproduces it bit-exactly.
struct Transcript {
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<TranscriptFrame> frames;
  Outcome out_a;
  Outcome out_b;
  std::string engine_note;  // set when the engine itself had to end the session

  void add_header(const std::string& k, const std::string& v) { header.emplace_back(k, v); }
  const std::string* find_header(const std::string& k) const;

  std::string to_text() const;
  static Transcript from_text(const std::string& text);

  bool same_frames_and_outcomes(const Transcript& o) const;
};

struct RewindingForbidden : std::runtime_error {
  RewindingForbidden() : std::runtime_error("state snapshots are disabled in quantum-realistic mode") {}
};

class SessionCtx;

// Resumable two-party program. step() consumes one incoming frame (nullptr
// when the engine activates a party that has no pending input) and returns
// the frames to deliver to the peer. A program is deterministic given its
// state, the incoming frames and its own randomness tape, which makes value
// copies (snapshots) behave identically under identical messages.
class Party {
 public:
  explicit Party(Side side) : side_(side) {}
  virtual ~Party() = default;

  virtual std::vector<Frame> step(const Frame* in, SessionCtx& ctx) = 0;
  virtual std::unique_ptr<Party> clone() const = 0;

  Side side() const { return side_; }
  bool done() const { return done_; }
  const Outcome& outcome() const { return outcome_; }

 protected:
  void finish(Bytes out) {
    outcome_ = std::move(out);
    done_ = true;
  }
  void abort_party() {
    outcome_ = std::nullopt;
    done_ = true;
  }

  Side side_;
  bool done_ = false;
  Outcome outcome_;
};

// One coin-flip invocation as seen from inside a party: either a call to the
// ideal functionality or an inlined sub-protocol, behind one interface.
class CoinDriver {
 public:
  virtual ~CoinDriver() = default;
  virtual std::vector<Frame> step(const Frame* in, SessionCtx& ctx) = 0;
  virtual bool finished() const = 0;
  virtual const Outcome& result() const = 0;
  virtual std::unique_ptr<CoinDriver> clone() const = 0;
  // whether an incoming frame belongs to this driver (sub-protocol frames do,
  // enclosing-protocol frames do not)
  virtual bool wants(const Frame&) const { return false; }
};

// Value wrapper so parties holding drivers stay default-copyable.
class CoinSlot {
 public:
  CoinSlot() = default;
  explicit CoinSlot(std::unique_ptr<CoinDriver> d) : d_(std::move(d)) {}
  CoinSlot(const CoinSlot& o) : d_(o.d_ ? o.d_->clone() : nullptr) {}
  CoinSlot& operator=(const CoinSlot& o) {
    d_ = o.d_ ? o.d_->clone() : nullptr;
    return *this;
  }
  CoinSlot(CoinSlot&&) = default;
  CoinSlot& operator=(CoinSlot&&) = default;

  explicit operator bool() const { return static_cast<bool>(d_); }
  CoinDriver* operator->() { return d_.get(); }
  const CoinDriver* operator->() const { return d_.get(); }
  CoinDriver& operator*() { return *d_; }
  void reset() { d_.reset(); }

 private:
  std::unique_ptr<CoinDriver> d_;
};

// Builds the driver for invocation `id` producing `nbits` coins, for the
// party playing `role` in the enclosing protocol. `rng` is the enclosing
// party's tape; composed drivers draw the sub-party's seed from it.
using CoinPlanner =
    std::function<std::unique_ptr<CoinDriver>(uint32_t id, size_t nbits, Side role, Rng& rng)>;

// Advance a pending coin flip. A frame addressed to the driver is fed to it;
// anything else is handed back through `leftover` for the enclosing protocol
// to process once the flip is finished (a frame can arrive in the same
// engine step that completes an ideal-functionality flip).
struct DriveStep {
  std::vector<Frame> frames;
  bool finished = false;
  const Frame* leftover = nullptr;
};
DriveStep drive_coin(CoinSlot& slot, const Frame* in, SessionCtx& ctx);

inline void append_frames(std::vector<Frame>& out, std::vector<Frame>& more) {
  for (auto& f : more) out.push_back(std::move(f));
}

using RelationFn = std::function<bool(const Bytes& instance, const Bytes& witness)>;

// Session-local ideal functionalities. The party-facing surface is reachable
// through SessionCtx; enforcement and inspection hooks are only reachable by
// whoever built the session (simulator entry points keep the registry
// handle), so honest programs cannot touch them.
class FunctionalityRegistry {
 public:
  explicit FunctionalityRegistry(uint64_t fn_seed) : rng_(fn_seed) {}

  // --- party-facing -------------------------------------------------------
  // Coin-flip instance `id` with nbits output. The value is sampled once and
  // only released after both parties have requested it (empty optional until
  // then). A registered dishonest hook sees the value first and may veto
  // delivery to the honest side (which then receives abort).
  std::optional<Outcome> coin(uint32_t id, size_t nbits, Side caller);

  // Proof of knowledge: the prover submits (x, w); the functionality
  // evaluates the relation and hands (x, judgment) to the verifier.
  void zkpk_submit(uint32_t id, const Bytes& x, const Bytes& w, const RelationFn& rel);
  struct ZkpkOut {
    Bytes x;
    bool success = false;
  };
  std::optional<ZkpkOut> zkpk_output(uint32_t id) const;

  // --- builder / simulator capabilities ------------------------------------
  void force_coin(uint32_t id, Bytes h);
  void hook_coin(uint32_t id, Side dishonest, std::function<bool(const Bytes&)> decide);
  // Witness inspection: what the prover handed to instance `id`.
  struct ZkpkSubmission {
    Bytes x;
    Bytes w;
  };
  std::optional<ZkpkSubmission> zkpk_submission(uint32_t id) const;
  // Inject an output without a witness (simulated prover side).
  void fake_zkpk(uint32_t id, Bytes x, bool success);

  void attach_transcript(Transcript* t) { transcript_ = t; }

 private:
  struct CoinInst {
    bool requested_a = false;
    bool requested_b = false;
    bool computed = false;
    Bytes value;
    bool vetoed = false;
    std::optional<Bytes> forced;
    std::optional<Side> hook_side;
    std::function<bool(const Bytes&)> hook;
  };
  struct ZkpkInst {
    bool have_output = false;
    ZkpkOut out;
    std::optional<ZkpkSubmission> submission;
  };

  void record(const std::string& tag, const Bytes& payload);

  Rng rng_;
  std::map<uint32_t, CoinInst> coins_;
  std::map<uint32_t, ZkpkInst> zkpks_;
  Transcript* transcript_ = nullptr;
};

struct SessionConfig {
  uint64_t seed = 0;
  BackendId backend = BackendId::Ideal;
  size_t ideal_kappa = 128;
  bool quantum_realistic = false;
  size_t max_frame_bytes = 1 << 20;
};

// Everything a party may legitimately reach during a step: the session's
// commitment scheme instance and the party-facing functionality surface.
class SessionCtx {
 public:
  SessionCtx(const SessionConfig& cfg, FunctionalityRegistry& reg, CommitScheme& scheme)
      : cfg_(cfg), reg_(reg), scheme_(scheme) {}

  CommitScheme& scheme() { return scheme_; }
  bool quantum_realistic() const { return cfg_.quantum_realistic; }
  size_t max_frame_bytes() const { return cfg_.max_frame_bytes; }

  std::optional<Outcome> coin(uint32_t id, size_t nbits, Side caller) {
    return reg_.coin(id, nbits, caller);
  }
  void zkpk_submit(uint32_t id, const Bytes& x, const Bytes& w, const RelationFn& rel) {
    reg_.zkpk_submit(id, x, w, rel);
  }
  std::optional<FunctionalityRegistry::ZkpkOut> zkpk_output(uint32_t id) {
    return reg_.zkpk_output(id);
  }

 private:
  const SessionConfig& cfg_;
  FunctionalityRegistry& reg_;
  CommitScheme& scheme_;
};

// Two-party execution engine: in-memory ordered delivery, strict turn
// alternation via activation when a party has nothing pending, transcript
// recording, deadlock and frame-size policing.
class Session {
 public:
  explicit Session(SessionConfig cfg);

  // seeds derived from the master seed by counter
  Rng party_rng(Side s) const;

  FunctionalityRegistry& registry() { return registry_; }
  SessionCtx& ctx() { return *ctx_; }
  CommitScheme& scheme() { return *scheme_; }
  const SessionConfig& config() const { return cfg_; }

  // Parties are borrowed so callers (simulators, tests) can inspect their
  // final state afterwards.
  Transcript run(Party& a, Party& b, std::vector<std::pair<std::string, std::string>> header = {});

 private:
  SessionConfig cfg_;
  FunctionalityRegistry registry_;
  std::unique_ptr<CommitScheme> scheme_;
  std::unique_ptr<SessionCtx> ctx_;
};

// Frozen copy of one party's state plus the number of frames it had consumed.
struct Snapshot {
  std::unique_ptr<Party> state;
  size_t channel_cursor = 0;
};

// Throws RewindingForbidden in quantum-realistic mode.
Snapshot snapshot_party(const Party& p, const SessionCtx& ctx, size_t channel_cursor = 0);
std::unique_ptr<Party> restore_party(const Snapshot& snap);

// ---------------------------------------------------------------------------
// Stand-alone ideal functionalities (the in-session registry mirrors these).

// lambda-bit coin-flip: honest parties both receive a uniform h; a dishonest
// party receives h first and its second input (top = deliver) decides whether
// the honest side sees h or abort.
class IdealCoin {
 public:
  IdealCoin(size_t nbits, Rng& rng) : h_(rng.bits(nbits)) {}
  const Bytes& honest_output() const { return h_; }
  const Bytes& dishonest_first_output() const { return h_; }
  Outcome counterpart_output(bool top) const { return top ? Outcome(h_) : std::nullopt; }

 private:
  Bytes h_;
};

// On input (x, w) from the prover, outputs (x, success) to the verifier iff
// the relation holds, (x, abort) otherwise.
struct IdealZkpk {
  RelationFn relation;
  std::pair<Bytes, bool> run(const Bytes& x, const Bytes& w) const { return {x, relation(x, w)}; }
};

// Evaluates y = f(x1, x2) for both parties; a dishonest party sees y first
// and its second input decides whether the honest side gets y or abort.
struct IdealSfe {
  std::function<Bytes(const Bytes&, const Bytes&)> f;
  Bytes honest_run(const Bytes& x1, const Bytes& x2) const { return f(x1, x2); }
  Bytes dishonest_first_output(const Bytes& x1, const Bytes& x2) const { return f(x1, x2); }
  Outcome counterpart_output(const Bytes& y, bool top) const { return top ? Outcome(y) : std::nullopt; }
};

// Hybrid-mode coin driver: one call to the session's coin functionality.
class HybridCoinDriver : public CoinDriver {
 public:
  HybridCoinDriver(uint32_t id, size_t nbits, Side self) : id_(id), nbits_(nbits), self_(self) {}

  std::vector<Frame> step(const Frame*, SessionCtx& ctx) override {
    if (!finished_) {
      std::optional<Outcome> r = ctx.coin(id_, nbits_, self_);
      if (r) {
        result_ = std::move(*r);
        finished_ = true;
      }
    }
    return {};
  }
  bool finished() const override { return finished_; }
  const Outcome& result() const override { return result_; }
  std::unique_ptr<CoinDriver> clone() const override { return std::make_unique<HybridCoinDriver>(*this); }

 private:
  uint32_t id_;
  size_t nbits_;
  Side self_;
  bool finished_ = false;
  Outcome result_;
};

CoinPlanner hybrid_planner();

// Inlines a sub-protocol party behind a tag prefix ("~<id>."); the outer
// party forwards prefixed frames here until the wrapped party finishes.
class ComposedCoinDriver : public CoinDriver {
 public:
  ComposedCoinDriver(uint32_t id, size_t nbits, std::unique_ptr<Party> sub);
  ComposedCoinDriver(const ComposedCoinDriver& o);

  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  bool finished() const override { return sub_ ? sub_->done() : true; }
  const Outcome& result() const override { return result_; }
  std::unique_ptr<CoinDriver> clone() const override { return std::make_unique<ComposedCoinDriver>(*this); }
  bool wants(const Frame& f) const override { return f.tag.rfind(prefix_, 0) == 0; }

  static std::string prefix_for(uint32_t id);

 private:
  uint32_t id_;
  size_t nbits_;
  std::string prefix_;
  std::unique_ptr<Party> sub_;
  Outcome result_;
};

}  // namespace scf
