#pragma once

#include "scf/harness.hpp"
#include "scf/sss.hpp"
#include "scf/subset.hpp"

namespace scf {

// Interactive string commitment: the committer shares the message, commits to
// every share position-wise, and the opening is spot-checked on a random
// sigma-subset produced by an injected coin flip. A cheating opening must lie
// about at least sigma cells and survives the check with probability at most
// (3/4)^sigma; a simulator that can force the subset can open to any message.

struct StringCommitment {
  std::vector<BaseCommitment> cells;  // one per share position

  Bytes serialize() const;
  static StringCommitment deserialize(const Bytes& b);
};

struct CommitterState {
  Message m;
  Message s;
  ShareVector shares;
  std::vector<Bytes> randomizers;
  MixedKey pk;
};

std::pair<CommitterState, StringCommitment> commit_phase(const SssParams& p, const Message& m,
                                                         const MixedKey& pk, CommitScheme& scheme,
                                                         Rng& rng);

// Per-cell extraction followed by nearest-codeword decoding; decoding failure
// maps to the all-zero message (any fixed answer serves the soundness
// argument, the zero message is the convention here).
Message extract_commit(const SssParams& p, const StringCommitment& M, const ExtractionKey& sk,
                       CommitScheme& scheme);

struct EquivocationTrapdoor {
  SubsetS S;  // the subset the simulator will force later
};

struct SimCommitState {
  CommitterState inner;
  SubsetS S;
};

// An honest commitment to an initial message, plus the bookkeeping needed to
// open it to something else later.
std::pair<SimCommitState, StringCommitment> equivocal_commit(const SssParams& p,
                                                             const EquivocationTrapdoor& trapdoor,
                                                             const Message& m, const MixedKey& pk,
                                                             CommitScheme& scheme, Rng& rng);

// Share vector announced when opening toward m_tilde: the unique low-degree
// polynomial that matches the committed shares on S and encodes m_tilde. It
// agrees with the cells exactly on S, so those spot-checks verify.
ShareVector equivocal_shares(const SssParams& p, const SimCommitState& st, const Message& m_tilde);

// --- party programs for the interactive phases ------------------------------

enum class SenderBehavior {
  Honest,
  // commit phase corrupts `corrupt_cells` cells; announced shares and
  // openings are honest, so the check fails exactly on corrupted positions
  CorruptCells,
  // commits to m, announces the sharing of a different message on the same
  // randomizer, opens with the stored randomizers
  OpenOtherMessage,
};

struct SenderOptions {
  SenderBehavior behavior = SenderBehavior::Honest;
  uint32_t corrupt_cells = 0;
  std::optional<Message> other_message;
};

class CommitSender : public Party {
 public:
  CommitSender(Side side, SssParams p, Message m, MixedKey pk, CoinPlanner planner, Rng rng,
               SenderOptions opts = {}, uint32_t subset_coin_id = 0);

  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override { return std::make_unique<CommitSender>(*this); }

  const CommitterState& state() const { return state_; }
  const ShareVector& announced() const { return announced_; }

 private:
  SssParams p_;
  Message m_;
  MixedKey pk_;
  CoinPlanner planner_;
  Rng rng_;
  SenderOptions opts_;
  uint32_t coin_id_;
  int phase_ = 0;
  CommitterState state_;
  ShareVector announced_;
  CoinSlot subset_flip_;
};

// Opens an honest commitment to an arbitrary substitute message; only valid
// in sessions where the subset flip is forced to the trapdoor subset.
class EquivocalSender : public Party {
 public:
  EquivocalSender(Side side, SssParams p, EquivocationTrapdoor trapdoor, Message initial,
                  Message substitute, MixedKey pk, CoinPlanner planner, Rng rng,
                  uint32_t subset_coin_id = 0);

  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override { return std::make_unique<EquivocalSender>(*this); }

 private:
  SssParams p_;
  EquivocationTrapdoor trapdoor_;
  Message initial_;
  Message substitute_;
  MixedKey pk_;
  CoinPlanner planner_;
  Rng rng_;
  uint32_t coin_id_;
  int phase_ = 0;
  SimCommitState state_;
  ShareVector announced_;
  CoinSlot subset_flip_;
};

class CommitReceiver : public Party {
 public:
  CommitReceiver(Side side, SssParams p, MixedKey pk, CoinPlanner planner, Rng rng,
                 uint32_t subset_coin_id = 0);

  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override;
  std::unique_ptr<Party> clone() const override { return std::make_unique<CommitReceiver>(*this); }

  const std::optional<StringCommitment>& commitment() const { return commitment_; }
  const ShareVector& announced() const { return announced_; }
  const std::optional<SubsetS>& subset() const { return subset_; }

 private:
  SssParams p_;
  MixedKey pk_;
  CoinPlanner planner_;
  Rng rng_;
  uint32_t coin_id_;
  int phase_ = 0;
  std::optional<StringCommitment> commitment_;
  ShareVector announced_;
  std::optional<SubsetS> subset_;
  CoinSlot subset_flip_;
};

// Frame payload helpers shared with the coin-flip stack.
Bytes encode_opens(const SssParams& p, const SubsetS& S, const std::vector<Bytes>& randomizers);
// position -> randomizer, positions strictly increasing; throws ParseError on malformed input
std::vector<std::pair<uint32_t, Bytes>> decode_opens(const Bytes& payload);

}  // namespace scf
