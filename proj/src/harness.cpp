#include "scf/harness.hpp"

#include <sstream>

namespace scf {

const std::string* Transcript::find_header(const std::string& k) const {
  for (const auto& [key, val] : header)
    if (key == k) return &val;
  return nullptr;
}

bool Transcript::same_frames_and_outcomes(const Transcript& o) const {
  return frames == o.frames && out_a == o.out_a && out_b == o.out_b && engine_note == o.engine_note;
}

// ---------------------------------------------------------------------------
// FunctionalityRegistry

void FunctionalityRegistry::record(const std::string& tag, const Bytes& payload) {
  if (!transcript_) return;
  transcript_->frames.push_back(
      TranscriptFrame{static_cast<uint32_t>(transcript_->frames.size()), 'F', tag, payload});
}

std::optional<Outcome> FunctionalityRegistry::coin(uint32_t id, size_t nbits, Side caller) {
  CoinInst& inst = coins_[id];
  (caller == Side::A ? inst.requested_a : inst.requested_b) = true;
  if (!inst.computed) {
    // the functionality fires only once both parties have asked for the coin
    if (!(inst.requested_a && inst.requested_b)) return std::nullopt;
    inst.value = inst.forced ? *inst.forced : rng_.bits(nbits);
    if (inst.value.size() != bytes_for_bits(nbits))
      throw std::invalid_argument("forced coin value has the wrong length");
    if (inst.hook) inst.vetoed = !inst.hook(inst.value);
    inst.computed = true;
    record("COIN" + std::to_string(id), inst.value);
    if (inst.vetoed) record("COIN" + std::to_string(id) + "!", {});
  }
  if (inst.hook_side && caller == *inst.hook_side)
    return Outcome{inst.value};  // the dishonest side always learns h
  if (inst.vetoed) return Outcome{std::nullopt};
  return Outcome{inst.value};
}

void FunctionalityRegistry::zkpk_submit(uint32_t id, const Bytes& x, const Bytes& w,
                                        const RelationFn& rel) {
  ZkpkInst& inst = zkpks_[id];
  if (inst.have_output) return;  // one submission per instance
  inst.submission = ZkpkSubmission{x, w};
  inst.out = ZkpkOut{x, rel(x, w)};
  inst.have_output = true;
  Bytes payload = x;
  payload.push_back(inst.out.success ? 1 : 0);
  record("ZKPK" + std::to_string(id), payload);
}

std::optional<FunctionalityRegistry::ZkpkOut> FunctionalityRegistry::zkpk_output(uint32_t id) const {
  auto it = zkpks_.find(id);
  if (it == zkpks_.end() || !it->second.have_output) return std::nullopt;
  return it->second.out;
}

void FunctionalityRegistry::force_coin(uint32_t id, Bytes h) { coins_[id].forced = std::move(h); }

void FunctionalityRegistry::hook_coin(uint32_t id, Side dishonest,
                                      std::function<bool(const Bytes&)> decide) {
  coins_[id].hook_side = dishonest;
  coins_[id].hook = std::move(decide);
}

std::optional<FunctionalityRegistry::ZkpkSubmission> FunctionalityRegistry::zkpk_submission(
    uint32_t id) const {
  auto it = zkpks_.find(id);
  if (it == zkpks_.end()) return std::nullopt;
  return it->second.submission;
}

void FunctionalityRegistry::fake_zkpk(uint32_t id, Bytes x, bool success) {
  ZkpkInst& inst = zkpks_[id];
  inst.out = ZkpkOut{std::move(x), success};
  inst.have_output = true;
  Bytes payload = inst.out.x;
  payload.push_back(success ? 1 : 0);
  record("ZKPK" + std::to_string(id), payload);
}

// ---------------------------------------------------------------------------
// Session engine

Session::Session(SessionConfig cfg)
    : cfg_(cfg),
      registry_(mix_seed(cfg.seed, 3)),
      scheme_(make_scheme(cfg.backend, cfg.ideal_kappa)),
      ctx_(std::make_unique<SessionCtx>(cfg_, registry_, *scheme_)) {}

Rng Session::party_rng(Side s) const { return Rng(mix_seed(cfg_.seed, s == Side::A ? 1 : 2)); }

Transcript Session::run(Party& a, Party& b, std::vector<std::pair<std::string, std::string>> header) {
  Transcript t;
  t.header = std::move(header);
  registry_.attach_transcript(&t);

  Party* parties[2] = {&a, &b};
  auto party_of = [&](Side s) -> Party& { return *parties[s == Side::A ? 0 : 1]; };

  std::deque<std::pair<Side, Frame>> queue;
  bool oversized = false;

  auto act = [&](Side s, const Frame* in) {
    std::vector<Frame> out = party_of(s).step(in, *ctx_);
    for (auto& fr : out) {
      if (fr.payload.size() > cfg_.max_frame_bytes) {
        // record the violation, not the payload; the counterparty aborts
        t.frames.push_back(TranscriptFrame{static_cast<uint32_t>(t.frames.size()), side_char(s),
                                           "!OVERSIZED:" + fr.tag, {}});
        t.engine_note = std::string("oversized frame from ") + side_char(s);
        oversized = true;
        return;
      }
      t.frames.push_back(
          TranscriptFrame{static_cast<uint32_t>(t.frames.size()), side_char(s), fr.tag, fr.payload});
      queue.emplace_back(peer(s), std::move(fr));
    }
  };

  act(Side::A, nullptr);
  Side nudge = Side::B;
  int stalled = 0;
  while (!oversized && !(party_of(Side::A).done() && party_of(Side::B).done())) {
    if (!queue.empty()) {
      auto [dest, frame] = std::move(queue.front());
      queue.pop_front();
      if (party_of(dest).done()) continue;  // late frames to a finished party are dropped
      act(dest, &frame);
      stalled = 0;
      continue;
    }
    // no pending delivery: activate a waiting party so it can make a move
    Side s = nudge;
    if (party_of(s).done()) s = peer(s);
    nudge = peer(s);
    size_t frames_before = t.frames.size();
    bool done_before = party_of(s).done();
    act(s, nullptr);
    bool progress = t.frames.size() != frames_before || party_of(s).done() != done_before;
    if (progress) {
      stalled = 0;
    } else if (++stalled >= 2) {
      t.engine_note = t.engine_note.empty() ? "deadlock" : t.engine_note;
      break;
    }
  }

  t.out_a = party_of(Side::A).done() ? party_of(Side::A).outcome() : std::nullopt;
  t.out_b = party_of(Side::B).done() ? party_of(Side::B).outcome() : std::nullopt;
  if (oversized) {
    // delivery stops at the violation; whoever has not produced output aborts
    if (!party_of(Side::A).done()) t.out_a = std::nullopt;
    if (!party_of(Side::B).done()) t.out_b = std::nullopt;
  }
  registry_.attach_transcript(nullptr);
  return t;
}

Snapshot snapshot_party(const Party& p, const SessionCtx& ctx, size_t channel_cursor) {
  if (ctx.quantum_realistic()) throw RewindingForbidden();
  return Snapshot{p.clone(), channel_cursor};
}

std::unique_ptr<Party> restore_party(const Snapshot& snap) {
  if (!snap.state) throw std::invalid_argument("restore_party: empty snapshot");
  return snap.state->clone();
}

// ---------------------------------------------------------------------------
// Coin drivers

DriveStep drive_coin(CoinSlot& slot, const Frame* in, SessionCtx& ctx) {
  DriveStep r;
  if (in && slot->wants(*in)) {
    r.frames = slot->step(in, ctx);
  } else {
    r.frames = slot->step(nullptr, ctx);
    r.leftover = in;
  }
  r.finished = slot->finished();
  return r;
}

CoinPlanner hybrid_planner() {
  return [](uint32_t id, size_t nbits, Side role, Rng&) -> std::unique_ptr<CoinDriver> {
    return std::make_unique<HybridCoinDriver>(id, nbits, role);
  };
}

std::string ComposedCoinDriver::prefix_for(uint32_t id) { return "~" + std::to_string(id) + "."; }

ComposedCoinDriver::ComposedCoinDriver(uint32_t id, size_t nbits, std::unique_ptr<Party> sub)
    : id_(id), nbits_(nbits), prefix_(prefix_for(id)), sub_(std::move(sub)) {}

ComposedCoinDriver::ComposedCoinDriver(const ComposedCoinDriver& o)
    : id_(o.id_), nbits_(o.nbits_), prefix_(o.prefix_), sub_(o.sub_ ? o.sub_->clone() : nullptr),
      result_(o.result_) {}

std::vector<Frame> ComposedCoinDriver::step(const Frame* in, SessionCtx& ctx) {
  if (!sub_ || sub_->done()) return {};
  Frame inner;
  const Frame* inner_ptr = nullptr;
  if (in) {
    if (in->tag.rfind(prefix_, 0) != 0) {
      // a frame for the enclosing protocol leaked into the sub-flip: treat as
      // a violation and end the flip with abort
      result_ = std::nullopt;
      sub_.reset();
      return {};
    }
    inner.tag = in->tag.substr(prefix_.size());
    inner.payload = in->payload;
    inner_ptr = &inner;
  }
  std::vector<Frame> out = sub_->step(inner_ptr, ctx);
  for (auto& fr : out) fr.tag = prefix_ + fr.tag;
  if (sub_->done()) {
    const Outcome& o = sub_->outcome();
    if (!o.has_value()) {
      result_ = std::nullopt;
    } else if (o->size() * 8 < nbits_) {
      result_ = std::nullopt;  // sub-protocol shorter than requested: abort
    } else {
      result_ = truncate_bits(*o, nbits_);
    }
  }
  return out;
}

}  // namespace scf
