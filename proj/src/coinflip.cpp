#include "scf/coinflip.hpp"

#include "scf/batch.hpp"

namespace scf {

const char* flavor_name(Flavor f) {
  switch (f) {
    case Flavor::Uncontrollable: return "uncont";
    case Flavor::Random: return "random";
    case Flavor::Enforceable: return "force";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Blum rounds. Tags: BK key (once), BC commitment, BB Bob's bit, BO opening.

Frame BlumAlice::make_commit(SessionCtx& ctx) {
  a_ = rng_.bit() ? 1 : 0;
  r_ = rng_.bytes(ctx.scheme().randomizer_len(1));
  return Frame{"BC", ctx.scheme().commit(pk_, Bytes{a_}, r_)};
}

std::vector<Frame> BlumAlice::step(const Frame* in, SessionCtx& ctx) {
  if (done_) return {};
  if (phase_ == 0) {
    pk_ = ctx.scheme().gen_hiding(rng_);
    coins_.assign(bytes_for_bits(p_.nbits), 0);
    phase_ = 1;
    return {Frame{"BK", pk_.bits}, make_commit(ctx)};
  }
  if (phase_ == 1) {
    if (!in) return {};
    if (in->tag != "BB" || in->payload.size() != 1 || in->payload[0] > 1) {
      abort_party();
      return {};
    }
    uint8_t b = in->payload[0];
    set_bit(coins_, round_, (a_ ^ b) != 0);
    Bytes open{a_};
    append(open, r_);
    std::vector<Frame> out{Frame{"BO", std::move(open)}};
    ++round_;
    if (round_ == p_.nbits) {
      finish(coins_);
    } else {
      out.push_back(make_commit(ctx));
    }
    return out;
  }
  abort_party();
  return {};
}

std::vector<Frame> BlumBob::step(const Frame* in, SessionCtx& ctx) {
  if (done_) return {};
  if (!in) return {};
  if (phase_ == 0) {
    if (in->tag != "BK") {
      abort_party();
      return {};
    }
    try {
      pk_ = ctx.scheme().key_from_bits(in->payload);
    } catch (const std::invalid_argument&) {
      abort_party();
      return {};
    }
    coins_.assign(bytes_for_bits(p_.nbits), 0);
    phase_ = 1;
    return {};
  }
  if (phase_ == 1) {
    if (in->tag != "BC") {
      abort_party();
      return {};
    }
    cmt_ = in->payload;
    b_ = rng_.bit() ? 1 : 0;
    phase_ = 2;
    return {Frame{"BB", Bytes{b_}}};
  }
  if (phase_ == 2) {
    if (in->tag != "BO" || in->payload.size() < 1) {
      abort_party();
      return {};
    }
    uint8_t a = in->payload[0];
    Bytes r(in->payload.begin() + 1, in->payload.end());
    if (a > 1 || !ctx.scheme().verify_open(pk_, cmt_, Bytes{a}, r)) {
      abort_party();
      return {};
    }
    set_bit(coins_, round_, (a ^ b_) != 0);
    ++round_;
    if (round_ == p_.nbits) {
      finish(coins_);
      return {};
    }
    phase_ = 1;
    return {};
  }
  abort_party();
  return {};
}

// ---------------------------------------------------------------------------
// XOR-with-commitment flip. Tags: CMT, BV, OPEN (a || r), QUIT.

std::vector<Frame> XorFlipAlice::step(const Frame* in, SessionCtx& ctx) {
  if (done_) return {};
  std::vector<Frame> out;
  if (phase_ == 0) {
    base_ = CoinSlot(p_.base(p_.base_coin_id, p_.kappa_bits, side_, rng_));
    phase_ = 1;
  }
  if (phase_ == 1) {
    DriveStep d = drive_coin(base_, in, ctx);
    append_frames(out, d.frames);
    if (!d.finished) {
      if (d.leftover) abort_party();
      return out;
    }
    in = d.leftover;
    const Outcome& key_bits = base_->result();
    if (!key_bits) {
      abort_party();
      return out;
    }
    pk_ = ctx.scheme().key_from_bits(*key_bits);
    a_ = choose_a();
    if (a_.size() != bytes_for_bits(p_.ell_bits)) {
      abort_party();
      return out;
    }
    r_ = rng_.bytes(ctx.scheme().randomizer_len(a_.size()));
    out.push_back(Frame{"CMT", ctx.scheme().commit(pk_, a_, r_)});
    phase_ = 2;
  }
  if (phase_ == 2) {
    if (!in) return out;
    if (in->tag != "BV" || in->payload.size() != bytes_for_bits(p_.ell_bits)) {
      abort_party();
      return out;
    }
    Bytes outcome = xor_bytes(a_, in->payload);
    mask_to_bits(outcome, p_.ell_bits);
    if (!willing_to_open(outcome)) {
      abort_party();
      out.push_back(Frame{"QUIT", {}});
      return out;
    }
    Bytes open = a_;
    append(open, r_);
    finish(outcome);
    out.push_back(Frame{"OPEN", std::move(open)});
    return out;
  }
  abort_party();
  return out;
}

std::vector<Frame> XorFlipBob::step(const Frame* in, SessionCtx& ctx) {
  if (done_) return {};
  std::vector<Frame> out;
  if (phase_ == 0) {
    base_ = CoinSlot(p_.base(p_.base_coin_id, p_.kappa_bits, side_, rng_));
    phase_ = 1;
  }
  if (phase_ == 1) {
    DriveStep d = drive_coin(base_, in, ctx);
    append_frames(out, d.frames);
    if (!d.finished) {
      if (d.leftover) abort_party();
      return out;
    }
    in = d.leftover;
    const Outcome& key_bits = base_->result();
    if (!key_bits) {
      abort_party();
      return out;
    }
    pk_ = ctx.scheme().key_from_bits(*key_bits);
    phase_ = 2;
  }
  if (phase_ == 2) {
    if (!in) return out;
    if (in->tag != "CMT") {
      abort_party();
      return out;
    }
    cmt_ = in->payload;
    b_ = choose_b(cmt_, ctx);
    if (b_.size() != bytes_for_bits(p_.ell_bits)) {
      abort_party();
      return out;
    }
    phase_ = 3;
    out.push_back(Frame{"BV", b_});
    return out;
  }
  if (phase_ == 3) {
    if (!in) return out;
    size_t alen = bytes_for_bits(p_.ell_bits);
    if (in->tag != "OPEN" || in->payload.size() < alen) {
      abort_party();
      return out;
    }
    Bytes a(in->payload.begin(), in->payload.begin() + alen);
    Bytes r(in->payload.begin() + alen, in->payload.end());
    if (!ctx.scheme().verify_open(pk_, cmt_, a, r)) {
      abort_party();
      return out;
    }
    Bytes outcome = xor_bytes(a, b_);
    mask_to_bits(outcome, p_.ell_bits);
    finish(outcome);
    return out;
  }
  abort_party();
  return out;
}

Bytes XorFlipBobDeriver::choose_b(const BaseCommitment& cmt, SessionCtx&) {
  // derive b deterministically from the commitment bytes; under a hiding key
  // this gains nothing
  Bytes b(bytes_for_bits(p_.ell_bits), 0);
  if (!b.empty())
    for (size_t i = 0; i < cmt.size(); ++i) b[i % b.size()] ^= cmt[i];
  mask_to_bits(b, p_.ell_bits);
  return b;
}

std::vector<Frame> PlainFlipAlice::step(const Frame* in, SessionCtx&) {
  if (done_) return {};
  if (phase_ == 0) {
    a_ = rng_.bits(ell_);
    phase_ = 1;
    return {Frame{"PLAIN", a_}};
  }
  if (!in) return {};
  if (in->tag != "BV" || in->payload.size() != bytes_for_bits(ell_)) {
    abort_party();
    return {};
  }
  Bytes c = xor_bytes(a_, in->payload);
  mask_to_bits(c, ell_);
  finish(c);
  return {};
}

std::vector<Frame> PlainFlipBobSteerer::step(const Frame* in, SessionCtx&) {
  if (done_) return {};
  if (!in) return {};
  if (in->tag != "PLAIN" || in->payload.size() != bytes_for_bits(ell_)) {
    abort_party();
    return {};
  }
  Bytes b = xor_bytes(in->payload, target_);
  Bytes c = target_;
  mask_to_bits(c, ell_);
  finish(c);
  return {Frame{"BV", std::move(b)}};
}

// ---------------------------------------------------------------------------
// Share-commitment flip. Tags: CELLS, BV, SHARES, subset-flip frames, OPENS.

std::vector<Frame> StrongFlipAlice::step(const Frame* in, SessionCtx& ctx) {
  if (done_) return {};
  std::vector<Frame> out;
  Field f(p_.sss.field);
  if (phase_ == 0) {
    key_flip_ = CoinSlot(p_.key_flip(p_.key_coin_id, p_.kappa_bits, side_, rng_));
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
    const Outcome& key_bits = key_flip_->result();
    if (!key_bits) {
      abort_party();
      return out;
    }
    pk_ = ctx.scheme().key_from_bits(*key_bits);
    Message a = random_message(p_.sss, rng_);
    auto [st, M] = commit_phase(p_.sss, a, pk_, ctx.scheme(), rng_);
    st_ = std::move(st);
    announced_ = st_.shares;
    StringCommitment sent = std::move(M);
    tamper(ctx, sent, announced_);
    out.push_back(Frame{"CELLS", sent.serialize()});
    phase_ = 2;
  }
  if (phase_ == 2) {
    if (!in) return out;
    if (in->tag != "BV" || in->payload.size() != bytes_for_bits(p_.ell_bits())) {
      abort_party();
      return out;
    }
    b_ = in->payload;
    subset_flip_ = CoinSlot(
        p_.subset_flip(p_.subset_coin_id, subset_coin_bits(p_.sss.Sigma, p_.sss.sigma), side_, rng_));
    out.push_back(Frame{"SHARES", serialize_shares(f, announced_)});
    phase_ = 3;
    return out;
  }
  if (phase_ == 3) {
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
    SubsetS S = subset_from_coins(*coins, p_.sss.Sigma, p_.sss.sigma);
    out.push_back(Frame{"OPENS", encode_opens(p_.sss, S, st_.randomizers)});
    Bytes mine = serialize_shares(f, sss_reconstruct(p_.sss, announced_));
    finish(xor_bytes(mine, b_));
    return out;
  }
  abort_party();
  return out;
}

std::vector<Frame> StrongFlipBob::step(const Frame* in, SessionCtx& ctx) {
  if (done_) return {};
  std::vector<Frame> out;
  Field f(p_.sss.field);
  if (phase_ == 0) {
    key_flip_ = CoinSlot(p_.key_flip(p_.key_coin_id, p_.kappa_bits, side_, rng_));
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
    const Outcome& key_bits = key_flip_->result();
    if (!key_bits) {
      abort_party();
      return out;
    }
    pk_ = ctx.scheme().key_from_bits(*key_bits);
    phase_ = 2;
  }
  if (phase_ == 2) {
    if (!in) return out;
    if (in->tag != "CELLS") {
      abort_party();
      return out;
    }
    try {
      StringCommitment M = StringCommitment::deserialize(in->payload);
      if (M.cells.size() != p_.sss.Sigma) throw ParseError("cell count");
      cells_ = std::move(M);
    } catch (const ParseError&) {
      abort_party();
      return out;
    }
    if (quit_after_cells()) {
      abort_party();
      out.push_back(Frame{"QUIT", {}});
      return out;
    }
    b_ = choose_b(ctx);
    phase_ = 3;
    out.push_back(Frame{"BV", b_});
    return out;
  }
  if (phase_ == 3) {
    if (!in) return out;
    if (in->tag != "SHARES") {
      abort_party();
      return out;
    }
    try {
      announced_ = deserialize_shares(f, in->payload, p_.sss.Sigma);
    } catch (const ParseError&) {
      abort_party();
      return out;
    }
    if (!sss_consistent(p_.sss, announced_)) {
      abort_party();
      return out;
    }
    subset_flip_ = CoinSlot(
        p_.subset_flip(p_.subset_coin_id, subset_coin_bits(p_.sss.Sigma, p_.sss.sigma), side_, rng_));
    phase_ = 4;
    in = nullptr;
  }
  if (phase_ == 4) {
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
    subset_ = subset_from_coins(*coins, p_.sss.Sigma, p_.sss.sigma);
    phase_ = 5;
  }
  if (phase_ == 5) {
    if (!in) return out;
    if (in->tag != "OPENS") {
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
      if (pos != subset_->positions[k] ||
          !ctx.scheme().verify_open(pk_, cells_->cells[pos - 1], f.serialize(announced_[pos - 1]),
                                    opens[k].second)) {
        abort_party();
        return out;
      }
    }
    Bytes a = serialize_shares(f, sss_reconstruct(p_.sss, announced_));
    finish(xor_bytes(a, b_));
    return out;
  }
  abort_party();
  return out;
}

void StrongFlipAliceCorrupt::tamper(SessionCtx& ctx, StringCommitment& M, ShareVector& announced) {
  Field f(p_.sss.field);
  for (uint32_t i = 0; i < bad_cells_ && i < p_.sss.Sigma; ++i) {
    Fe wrong = f.add(announced[i], f.one());
    Bytes msg = f.serialize(wrong);
    Bytes r = rng_.bytes(ctx.scheme().randomizer_len(msg.size()));
    M.cells[i] = ctx.scheme().commit(pk_, msg, r);
  }
}

void StrongFlipAliceSwap::tamper(SessionCtx&, StringCommitment&, ShareVector& announced) {
  // keep the commitments, announce a different codeword over the same randomizer
  Field f(p_.sss.field);
  Message other = st_.m;
  other[0] = f.add(other[0], f.one());
  announced = sss_share(p_.sss, other, st_.s);
}

// ---------------------------------------------------------------------------
// Planners

CoinPlanner composed_blum_planner() {
  return [](uint32_t id, size_t nbits, Side role, Rng& rng) -> std::unique_ptr<CoinDriver> {
    Rng sub_rng(rng.next_u64());
    std::unique_ptr<Party> sub;
    if (role == Side::A)
      sub = std::make_unique<BlumAlice>(role, BlumParams{nbits}, sub_rng);
    else
      sub = std::make_unique<BlumBob>(role, BlumParams{nbits}, sub_rng);
    return std::make_unique<ComposedCoinDriver>(id, nbits, std::move(sub));
  };
}

CoinPlanner composed_xor_flip_planner(bool swap_roles, size_t kappa_bits) {
  return [swap_roles, kappa_bits](uint32_t id, size_t nbits, Side role,
                                  Rng& rng) -> std::unique_ptr<CoinDriver> {
    Rng sub_rng(rng.next_u64());
    XorFlipParams sub;
    sub.ell_bits = nbits;
    sub.kappa_bits = kappa_bits;
    sub.base = composed_blum_planner();
    Side eff = swap_roles ? peer(role) : role;
    std::unique_ptr<Party> party;
    if (eff == Side::A)
      party = std::make_unique<XorFlipAlice>(role, std::move(sub), sub_rng);
    else
      party = std::make_unique<XorFlipBob>(role, std::move(sub), sub_rng);
    return std::make_unique<ComposedCoinDriver>(id, nbits, std::move(party));
  };
}

XorFlipParams make_xor_flip_params(size_t ell_bits, size_t kappa_bits, bool composed) {
  XorFlipParams p;
  p.ell_bits = ell_bits;
  p.kappa_bits = kappa_bits;
  p.base = composed ? composed_blum_planner() : hybrid_planner();
  return p;
}

StrongFlipParams make_strong_flip_params(const SssParams& sss, size_t kappa_bits, bool composed) {
  StrongFlipParams p(sss);
  p.kappa_bits = kappa_bits;
  if (composed) {
    p.key_flip = composed_xor_flip_planner(/*swap_roles=*/false, kappa_bits);
    p.subset_flip = composed_xor_flip_planner(/*swap_roles=*/true, kappa_bits);
  } else {
    p.key_flip = hybrid_planner();
    p.subset_flip = hybrid_planner();
  }
  return p;
}

// ---------------------------------------------------------------------------
// Enforcement simulators

namespace {

Bytes normalize_to(const Bytes& raw, size_t nbits) {
  Bytes out = raw;
  out.resize(bytes_for_bits(nbits), 0);
  mask_to_bits(out, nbits);
  return out;
}

// Bob-seat simulator for the XOR flip: replies with target xor extracted(a).
class SimXorBob : public XorFlipBob {
 public:
  SimXorBob(Side side, XorFlipParams p, Rng rng, Bytes target, ExtractionKey sk)
      : XorFlipBob(side, std::move(p), rng), target_(std::move(target)), sk_(std::move(sk)) {}
  std::unique_ptr<Party> clone() const override { return std::make_unique<SimXorBob>(*this); }

 private:
  Bytes choose_b(const BaseCommitment& cmt, SessionCtx& ctx) override {
    Bytes extracted = normalize_to(ctx.scheme().xtr(cmt, sk_), p_.ell_bits);
    return xor_bytes(target_, extracted);
  }
  Bytes target_;
  ExtractionKey sk_;
};

// Same seat for the share-commitment flip: decodes the nearest codeword of
// the extracted cells and replies with its complement.
class SimStrongBob : public StrongFlipBob {
 public:
  SimStrongBob(Side side, StrongFlipParams p, Rng rng, Bytes target, ExtractionKey sk)
      : StrongFlipBob(side, std::move(p), rng), target_(std::move(target)), sk_(std::move(sk)) {}
  std::unique_ptr<Party> clone() const override { return std::make_unique<SimStrongBob>(*this); }

 private:
  Bytes choose_b(SessionCtx& ctx) override {
    Message a = extract_commit(p_.sss, *cells_, sk_, ctx.scheme());
    Bytes ser = serialize_shares(Field(p_.sss.field), a);
    return xor_bytes(target_, ser);
  }
  Bytes target_;
  ExtractionKey sk_;
};

// Alice-seat simulator for the share-commitment flip: commits to a random
// placeholder, learns b, and opens equivocally toward target xor b under the
// pre-forced subset.
class SimStrongAlice : public Party {
 public:
  SimStrongAlice(Side side, StrongFlipParams p, Rng rng, Bytes target, SubsetS forced)
      : Party(side), p_(std::move(p)), rng_(rng), target_(std::move(target)),
        forced_(std::move(forced)) {}
  std::unique_ptr<Party> clone() const override { return std::make_unique<SimStrongAlice>(*this); }

  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override {
    if (done_) return {};
    std::vector<Frame> out;
    Field f(p_.sss.field);
    if (phase_ == 0) {
      key_flip_ = CoinSlot(p_.key_flip(p_.key_coin_id, p_.kappa_bits, side_, rng_));
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
      const Outcome& key_bits = key_flip_->result();
      if (!key_bits) {
        abort_party();
        return out;
      }
      pk_ = ctx.scheme().key_from_bits(*key_bits);
      Message placeholder = random_message(p_.sss, rng_);
      auto [st, M] = equivocal_commit(p_.sss, EquivocationTrapdoor{forced_}, placeholder, pk_,
                                      ctx.scheme(), rng_);
      st_ = std::move(st);
      out.push_back(Frame{"CELLS", M.serialize()});
      phase_ = 2;
    }
    if (phase_ == 2) {
      if (!in) return out;
      if (in->tag != "BV" || in->payload.size() != bytes_for_bits(p_.ell_bits())) {
        abort_party();
        return out;
      }
      b_ = in->payload;
      Message substitute = deserialize_shares(f, xor_bytes(target_, b_), p_.sss.sigma);
      announced_ = equivocal_shares(p_.sss, st_, substitute);
      subset_flip_ = CoinSlot(p_.subset_flip(p_.subset_coin_id,
                                             subset_coin_bits(p_.sss.Sigma, p_.sss.sigma), side_, rng_));
      out.push_back(Frame{"SHARES", serialize_shares(f, announced_)});
      phase_ = 3;
      return out;
    }
    if (phase_ == 3) {
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
      SubsetS S = subset_from_coins(*coins, p_.sss.Sigma, p_.sss.sigma);
      if (S.positions != forced_.positions) {
        // enforcement of the subordinate flip failed
        abort_party();
        return out;
      }
      out.push_back(Frame{"OPENS", encode_opens(p_.sss, S, st_.inner.randomizers)});
      finish(target_);
      return out;
    }
    abort_party();
    return out;
  }


 private:
  StrongFlipParams p_;
  Rng rng_;
  Bytes target_;
  SubsetS forced_;
  int phase_ = 0;
  CoinSlot key_flip_, subset_flip_;
  MixedKey pk_;
  SimCommitState st_;
  ShareVector announced_;
  Bytes b_;
};

}  // namespace

EnforceStats enforce_xor_flip_alice(const PartyFactory& alice, const Bytes& target,
                                    const SessionConfig& cfg, size_t ell_bits) {
  Session sess(cfg);
  Rng sim_rng(mix_seed(cfg.seed, 11));
  KeyPair kp = sess.scheme().gen_binding(sim_rng);
  sess.registry().force_coin(0, kp.pk.bits);
  XorFlipParams p = make_xor_flip_params(ell_bits, sess.scheme().key_bits(), /*composed=*/false);
  auto adv = alice(Side::A, sess.party_rng(Side::A));
  auto sim = std::make_unique<SimXorBob>(Side::B, p, sess.party_rng(Side::B), target, kp.sk);
  EnforceStats st;
  st.transcript = sess.run(*adv, *sim);
  st.outcome = st.transcript.out_b;
  st.completed = st.outcome.has_value();
  st.hit_target = st.completed && *st.outcome == target;
  return st;
}

EnforceStats enforce_strong_flip_alice(const PartyFactory& alice, const Bytes& target,
                                       const SessionConfig& cfg, const SssParams& sss) {
  Session sess(cfg);
  Rng sim_rng(mix_seed(cfg.seed, 11));
  KeyPair kp = sess.scheme().gen_binding(sim_rng);
  sess.registry().force_coin(0, kp.pk.bits);
  StrongFlipParams p = make_strong_flip_params(sss, sess.scheme().key_bits(), /*composed=*/false);
  auto adv = alice(Side::A, sess.party_rng(Side::A));
  auto sim = std::make_unique<SimStrongBob>(Side::B, p, sess.party_rng(Side::B), target, kp.sk);
  EnforceStats st;
  st.transcript = sess.run(*adv, *sim);
  st.outcome = st.transcript.out_b;
  st.completed = st.outcome.has_value();
  st.hit_target = st.completed && *st.outcome == target;
  return st;
}

EnforceStats enforce_strong_flip_bob(const PartyFactory& bob, const Bytes& target,
                                     const SessionConfig& cfg, const SssParams& sss) {
  Session sess(cfg);
  Rng sim_rng(mix_seed(cfg.seed, 11));
  SubsetS forced = random_subset(sss.Sigma, sss.sigma, sim_rng);
  sess.registry().force_coin(1, coins_for_subset(forced, sss.Sigma, sss.sigma, sim_rng));
  StrongFlipParams p = make_strong_flip_params(sss, sess.scheme().key_bits(), /*composed=*/false);
  auto sim = std::make_unique<SimStrongAlice>(Side::A, p, sess.party_rng(Side::A), target, forced);
  auto adv = bob(Side::B, sess.party_rng(Side::B));
  EnforceStats st;
  st.transcript = sess.run(*sim, *adv);
  st.outcome = st.transcript.out_a;
  st.completed = st.outcome.has_value();
  st.hit_target = st.completed && *st.outcome == target;
  return st;
}

// ---------------------------------------------------------------------------
// Rewinding enforcement for a single Blum round

RewindResult rewind_enforce_blum(const PartyFactory& committer, bool target,
                                 const SessionConfig& cfg, RewindStrategy strategy,
                                 uint32_t max_attempts) {
  Session sess(cfg);
  auto adv = committer(Side::A, sess.party_rng(Side::A));
  std::vector<Frame> opening_moves = adv->step(nullptr, sess.ctx());
  if (opening_moves.size() != 2 || opening_moves[0].tag != "BK" || opening_moves[1].tag != "BC")
    return RewindResult{std::nullopt, 0};
  MixedKey pk;
  try {
    pk = sess.scheme().key_from_bits(opening_moves[0].payload);
  } catch (const std::invalid_argument&) {
    return RewindResult{std::nullopt, 0};
  }
  BaseCommitment cmt = opening_moves[1].payload;
  Snapshot snap = snapshot_party(*adv, sess.ctx(), 0);

  Rng sim(mix_seed(cfg.seed, 13));
  auto try_branch = [&](std::unique_ptr<Party> branch, uint8_t b) -> std::optional<uint8_t> {
    Frame bb{"BB", Bytes{b}};
    std::vector<Frame> reply = branch->step(&bb, sess.ctx());
    if (reply.empty() || reply[0].tag != "BO" || reply[0].payload.size() < 1) return std::nullopt;
    uint8_t a = reply[0].payload[0];
    Bytes r(reply[0].payload.begin() + 1, reply[0].payload.end());
    if (a > 1 || !sess.scheme().verify_open(pk, cmt, Bytes{a}, r)) return std::nullopt;
    return static_cast<uint8_t>(a ^ b);
  };

  RewindResult res;
  if (strategy == RewindStrategy::ExtractThenHit) {
    // probe once with b=0 to learn the committed bit, then hit the target
    res.attempts = 1;
    auto c0 = try_branch(restore_party(snap), 0);
    if (!c0) return res;
    uint8_t a = *c0;  // c = a xor 0
    if ((a != 0) == target) {
      res.outcome = Bytes{a};
      return res;
    }
    res.attempts = 2;
    uint8_t b = a ^ (target ? 1 : 0);
    auto c1 = try_branch(restore_party(snap), b);
    if (c1) res.outcome = Bytes{*c1};
    return res;
  }
  // resample fresh uniform b until the outcome lands on the target
  while (res.attempts < max_attempts) {
    ++res.attempts;
    uint8_t b = sim.bit() ? 1 : 0;
    auto c = try_branch(restore_party(snap), b);
    if (!c) return res;  // refusal in any branch ends the simulation with abort
    if ((*c != 0) == target) {
      res.outcome = Bytes{*c};
      return res;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Flavor measurement

UncontTestResult flavor_test_uncont(const OutcomeRunner& runner, uint64_t n, uint64_t master_seed,
                                    const std::function<bool(const Bytes&)>& in_q, bool parallel) {
  struct Tally {
    uint8_t completed = 0;
    uint8_t hit = 0;
  };
  auto results = run_batch<Tally>(n, master_seed, parallel ? ExecMode::Parallel : ExecMode::Serial,
                                  [&](uint64_t, uint64_t seed) {
                                    Outcome o = runner(seed);
                                    Tally t;
                                    t.completed = o.has_value() ? 1 : 0;
                                    t.hit = (o && in_q(*o)) ? 1 : 0;
                                    return t;
                                  });
  UncontTestResult r;
  r.runs = n;
  for (const auto& t : results) {
    r.completed += t.completed;
    r.hits += t.hit;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Honest-session helpers

Transcript run_blum_session(const SessionConfig& cfg, size_t nbits) {
  Session sess(cfg);
  auto a = std::make_unique<BlumAlice>(Side::A, BlumParams{nbits}, sess.party_rng(Side::A));
  auto b = std::make_unique<BlumBob>(Side::B, BlumParams{nbits}, sess.party_rng(Side::B));
  return sess.run(*a, *b);
}

Transcript run_xor_flip_session(const SessionConfig& cfg, size_t ell_bits, bool composed) {
  Session sess(cfg);
  XorFlipParams p = make_xor_flip_params(ell_bits, sess.scheme().key_bits(), composed);
  auto a = std::make_unique<XorFlipAlice>(Side::A, p, sess.party_rng(Side::A));
  auto b = std::make_unique<XorFlipBob>(Side::B, p, sess.party_rng(Side::B));
  return sess.run(*a, *b);
}

Transcript run_strong_flip_session(const SessionConfig& cfg, const SssParams& sss, bool composed) {
  Session sess(cfg);
  StrongFlipParams p = make_strong_flip_params(sss, sess.scheme().key_bits(), composed);
  auto a = std::make_unique<StrongFlipAlice>(Side::A, p, sess.party_rng(Side::A));
  auto b = std::make_unique<StrongFlipBob>(Side::B, p, sess.party_rng(Side::B));
  return sess.run(*a, *b);
}

}  // namespace scf
