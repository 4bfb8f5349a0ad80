#include "scf/string_commit.hpp"

namespace scf {

Bytes StringCommitment::serialize() const {
  Bytes out;
  put_u32(out, static_cast<uint32_t>(cells.size()));
  for (const auto& c : cells) put_chunk(out, c);
  return out;
}

StringCommitment StringCommitment::deserialize(const Bytes& b) {
  size_t pos = 0;
  uint32_t n = read_u32(b, pos);
  if (n > (1u << 20)) throw ParseError("StringCommitment: absurd cell count");
  StringCommitment M;
  M.cells.reserve(n);
  for (uint32_t i = 0; i < n; ++i) M.cells.push_back(read_chunk(b, pos));
  if (pos != b.size()) throw ParseError("StringCommitment: trailing bytes");
  return M;
}

std::pair<CommitterState, StringCommitment> commit_phase(const SssParams& p, const Message& m,
                                                         const MixedKey& pk, CommitScheme& scheme,
                                                         Rng& rng) {
  Field f(p.field);
  CommitterState st;
  st.m = m;
  st.s = random_message(p, rng);
  st.shares = sss_share(p, m, st.s);
  st.pk = pk;
  StringCommitment M;
  M.cells.reserve(p.Sigma);
  st.randomizers.reserve(p.Sigma);
  for (uint32_t i = 0; i < p.Sigma; ++i) {
    Bytes msg = f.serialize(st.shares[i]);
    Bytes r = rng.bytes(scheme.randomizer_len(msg.size()));
    M.cells.push_back(scheme.commit(pk, msg, r));
    st.randomizers.push_back(std::move(r));
  }
  return {std::move(st), std::move(M)};
}

Message extract_commit(const SssParams& p, const StringCommitment& M, const ExtractionKey& sk,
                       CommitScheme& scheme) {
  if (M.cells.size() != p.Sigma) throw std::invalid_argument("extract_commit: cell count");
  Field f(p.field);
  ShareVector extracted(p.Sigma, f.zero());
  for (uint32_t i = 0; i < p.Sigma; ++i) {
    Bytes raw = scheme.xtr(M.cells[i], sk);
    // anything that is not a valid element encoding counts as the zero element
    if (raw.size() == p.field.element_bytes()) {
      size_t pos = 0;
      try {
        extracted[i] = f.deserialize(raw, pos);
      } catch (const ParseError&) {
      }
    }
  }
  auto decoded = sss_nearest_codeword(p, extracted);
  if (!decoded) return Message(p.sigma, f.zero());
  return decoded->message;
}

std::pair<SimCommitState, StringCommitment> equivocal_commit(const SssParams& p,
                                                             const EquivocationTrapdoor& trapdoor,
                                                             const Message& m, const MixedKey& pk,
                                                             CommitScheme& scheme, Rng& rng) {
  trapdoor.S.validate(p);
  auto [st, M] = commit_phase(p, m, pk, scheme, rng);
  return {SimCommitState{std::move(st), trapdoor.S}, std::move(M)};
}

ShareVector equivocal_shares(const SssParams& p, const SimCommitState& st, const Message& m_tilde) {
  if (m_tilde.size() != p.sigma) throw std::invalid_argument("equivocal_shares: message length");
  Field f(p.field);
  std::vector<std::pair<Fe, Fe>> pts;
  pts.reserve(2 * p.sigma);
  for (uint32_t pos : st.S.positions) pts.emplace_back(p.share_point(pos), st.inner.shares[pos - 1]);
  for (uint32_t i = 1; i <= p.sigma; ++i) pts.emplace_back(p.message_point(i), m_tilde[i - 1]);
  Poly poly = interpolate(f, pts);
  ShareVector out(p.Sigma);
  for (uint32_t i = 1; i <= p.Sigma; ++i) out[i - 1] = poly_eval(f, poly, p.share_point(i));
  return out;
}

Bytes encode_opens(const SssParams& p, const SubsetS& S, const std::vector<Bytes>& randomizers) {
  (void)p;
  Bytes out;
  for (uint32_t pos : S.positions) {
    put_u32(out, pos);
    put_chunk(out, randomizers.at(pos - 1));
  }
  return out;
}

std::vector<std::pair<uint32_t, Bytes>> decode_opens(const Bytes& payload) {
  std::vector<std::pair<uint32_t, Bytes>> out;
  size_t pos = 0;
  while (pos < payload.size()) {
    uint32_t cell = read_u32(payload, pos);
    Bytes r = read_chunk(payload, pos);
    if (!out.empty() && cell <= out.back().first) throw ParseError("opens: positions not increasing");
    out.emplace_back(cell, std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Party programs
//
// Frame flow: sender CELLS + SHARES, subset flip frames (if any), sender
// OPENS. The receiver aborts at the first malformed or failing step.

namespace {
constexpr const char* kTagCells = "CELLS";
constexpr const char* kTagShares = "SHARES";
constexpr const char* kTagOpens = "OPENS";
}  // namespace

CommitSender::CommitSender(Side side, SssParams p, Message m, MixedKey pk, CoinPlanner planner,
                           Rng rng, SenderOptions opts, uint32_t subset_coin_id)
    : Party(side), p_(p), m_(std::move(m)), pk_(std::move(pk)), planner_(std::move(planner)),
      rng_(rng), opts_(std::move(opts)), coin_id_(subset_coin_id) {}

std::vector<Frame> CommitSender::step(const Frame* in, SessionCtx& ctx) {
  if (done_) return {};
  std::vector<Frame> out;
  if (phase_ == 0) {
    auto [st, M] = commit_phase(p_, m_, pk_, ctx.scheme(), rng_);
    state_ = std::move(st);
    announced_ = state_.shares;
    StringCommitment sent = std::move(M);
    Field f(p_.field);
    switch (opts_.behavior) {
      case SenderBehavior::Honest:
        break;
      case SenderBehavior::CorruptCells: {
        // replace the first `corrupt_cells` cells with commitments to a
        // different element; the announced shares stay honest
        for (uint32_t i = 0; i < opts_.corrupt_cells && i < p_.Sigma; ++i) {
          Fe wrong = f.add(state_.shares[i], f.one());
          Bytes msg = f.serialize(wrong);
          Bytes r = rng_.bytes(ctx.scheme().randomizer_len(msg.size()));
          sent.cells[i] = ctx.scheme().commit(pk_, msg, r);
        }
        break;
      }
      case SenderBehavior::OpenOtherMessage: {
        if (!opts_.other_message) throw std::invalid_argument("OpenOtherMessage needs a message");
        announced_ = sss_share(p_, *opts_.other_message, state_.s);
        break;
      }
    }
    subset_flip_ = CoinSlot(planner_(coin_id_, subset_coin_bits(p_.Sigma, p_.sigma), side_, rng_));
    out.push_back(Frame{kTagCells, sent.serialize()});
    out.push_back(Frame{kTagShares, serialize_shares(f, announced_)});
    phase_ = 1;
    return out;
  }
  if (phase_ == 1) {
    DriveStep d = drive_coin(subset_flip_, in, ctx);
    append_frames(out, d.frames);
    if (!d.finished) {
      if (d.leftover) abort_party();
      return out;
    }
    const Outcome& coins = subset_flip_->result();
    if (!coins) {
      abort_party();
      return out;
    }
    SubsetS S = subset_from_coins(*coins, p_.Sigma, p_.sigma);
    out.push_back(Frame{kTagOpens, encode_opens(p_, S, state_.randomizers)});
    finish(serialize_shares(Field(p_.field), announced_));
    return out;
  }
  abort_party();
  return out;
}

EquivocalSender::EquivocalSender(Side side, SssParams p, EquivocationTrapdoor trapdoor,
                                 Message initial, Message substitute, MixedKey pk,
                                 CoinPlanner planner, Rng rng, uint32_t subset_coin_id)
    : Party(side), p_(p), trapdoor_(std::move(trapdoor)), initial_(std::move(initial)),
      substitute_(std::move(substitute)), pk_(std::move(pk)), planner_(std::move(planner)),
      rng_(rng), coin_id_(subset_coin_id) {}

std::vector<Frame> EquivocalSender::step(const Frame* in, SessionCtx& ctx) {
  if (done_) return {};
  std::vector<Frame> out;
  if (phase_ == 0) {
    auto [st, M] = equivocal_commit(p_, trapdoor_, initial_, pk_, ctx.scheme(), rng_);
    state_ = std::move(st);
    announced_ = equivocal_shares(p_, state_, substitute_);
    subset_flip_ = CoinSlot(planner_(coin_id_, subset_coin_bits(p_.Sigma, p_.sigma), side_, rng_));
    out.push_back(Frame{kTagCells, M.serialize()});
    out.push_back(Frame{kTagShares, serialize_shares(Field(p_.field), announced_)});
    phase_ = 1;
    return out;
  }
  if (phase_ == 1) {
    DriveStep d = drive_coin(subset_flip_, in, ctx);
    append_frames(out, d.frames);
    if (!d.finished) {
      if (d.leftover) abort_party();
      return out;
    }
    const Outcome& coins = subset_flip_->result();
    if (!coins) {
      abort_party();
      return out;
    }
    SubsetS S = subset_from_coins(*coins, p_.Sigma, p_.sigma);
    if (S.positions != state_.S.positions) {
      // the flip was not (or wrongly) forced; equivocation cannot proceed
      abort_party();
      return out;
    }
    out.push_back(Frame{kTagOpens, encode_opens(p_, S, state_.inner.randomizers)});
    finish(serialize_shares(Field(p_.field), announced_));
    return out;
  }
  abort_party();
  return out;
}

CommitReceiver::CommitReceiver(Side side, SssParams p, MixedKey pk, CoinPlanner planner, Rng rng,
                               uint32_t subset_coin_id)
    : Party(side), p_(p), pk_(std::move(pk)), planner_(std::move(planner)), rng_(rng),
      coin_id_(subset_coin_id) {}

std::vector<Frame> CommitReceiver::step(const Frame* in, SessionCtx& ctx) {
  if (done_) return {};
  std::vector<Frame> out;
  Field f(p_.field);
  if (phase_ == 0) {
    if (!in) return out;
    if (in->tag != kTagCells) {
      abort_party();
      return out;
    }
    try {
      StringCommitment M = StringCommitment::deserialize(in->payload);
      if (M.cells.size() != p_.Sigma) throw ParseError("cell count");
      commitment_ = std::move(M);
    } catch (const ParseError&) {
      abort_party();
      return out;
    }
    phase_ = 1;
    return out;
  }
  if (phase_ == 1) {
    if (!in) return out;
    if (in->tag != kTagShares) {
      abort_party();
      return out;
    }
    try {
      announced_ = deserialize_shares(f, in->payload, p_.Sigma);
    } catch (const ParseError&) {
      abort_party();
      return out;
    }
    if (!sss_consistent(p_, announced_)) {
      abort_party();
      return out;
    }
    subset_flip_ = CoinSlot(planner_(coin_id_, subset_coin_bits(p_.Sigma, p_.sigma), side_, rng_));
    phase_ = 2;
    in = nullptr;
  }
  if (phase_ == 2) {
    DriveStep d = drive_coin(subset_flip_, in, ctx);
    append_frames(out, d.frames);
    if (!d.finished) {
      if (d.leftover) abort_party();
      return out;
    }
    in = d.leftover;
    const Outcome& coins = subset_flip_->result();
    if (!coins) {
      abort_party();
      return out;
    }
    subset_ = subset_from_coins(*coins, p_.Sigma, p_.sigma);
    phase_ = 3;
  }
  if (phase_ == 3) {
    if (!in) return out;
    if (in->tag != kTagOpens) {
      abort_party();
      return out;
    }
    std::vector<std::pair<uint32_t, Bytes>> opens;
    try {
      opens = decode_opens(in->payload);
    } catch (const ParseError&) {
      abort_party();
      return out;
    }
    if (opens.size() != subset_->positions.size()) {
      abort_party();
      return out;
    }
    for (size_t k = 0; k < opens.size(); ++k) {
      uint32_t pos = opens[k].first;
      if (pos != subset_->positions[k]) {
        abort_party();
        return out;
      }
      Bytes msg = f.serialize(announced_[pos - 1]);
      if (!ctx.scheme().verify_open(pk_, commitment_->cells[pos - 1], msg, opens[k].second)) {
        abort_party();
        return out;
      }
    }
    Message m = sss_reconstruct(p_, announced_);
    finish(serialize_shares(f, m));
    return out;
  }
  abort_party();
  return out;
}

}  // namespace scf
