#include "scf/ot_sfe.hpp"

namespace scf {

// ---------------------------------------------------------------------------
// Oblivious transfer. Tags: KEYS (pk0 || pk1, chunked), CMTS (C0 || C1).

std::vector<Frame> OtSender::step(const Frame* in, SessionCtx& ctx) {
  if (done_) return {};
  if (!in) return {};
  if (in->tag != "KEYS") {
    abort_party();
    return {};
  }
  MixedKey pk0, pk1;
  try {
    size_t pos = 0;
    pk0 = ctx.scheme().key_from_bits(read_chunk(in->payload, pos));
    pk1 = ctx.scheme().key_from_bits(read_chunk(in->payload, pos));
    if (pos != in->payload.size()) throw ParseError("trailing");
  } catch (const std::exception&) {
    abort_party();
    return {};
  }
  Bytes r0 = rng_.bytes(ctx.scheme().randomizer_len(m0_.size()));
  Bytes r1 = rng_.bytes(ctx.scheme().randomizer_len(m1_.size()));
  Bytes payload;
  put_chunk(payload, ctx.scheme().commit(pk0, m0_, r0));
  put_chunk(payload, ctx.scheme().commit(pk1, m1_, r1));
  finish({});
  return {Frame{"CMTS", std::move(payload)}};
}

std::vector<Frame> OtReceiver::step(const Frame* in, SessionCtx& ctx) {
  if (done_) return {};
  if (phase_ == 0) {
    // the chosen slot gets the extractable key, the other a plain hiding key
    KeyPair chosen = ctx.scheme().gen_binding(rng_);
    MixedKey other = ctx.scheme().gen_hiding(rng_);
    sk_ = chosen.sk;
    Bytes payload;
    put_chunk(payload, choice_ ? other.bits : chosen.pk.bits);
    put_chunk(payload, choice_ ? chosen.pk.bits : other.bits);
    phase_ = 1;
    return {Frame{"KEYS", std::move(payload)}};
  }
  if (!in) return {};
  if (in->tag != "CMTS") {
    abort_party();
    return {};
  }
  Bytes c0, c1;
  try {
    size_t pos = 0;
    c0 = read_chunk(in->payload, pos);
    c1 = read_chunk(in->payload, pos);
    if (pos != in->payload.size()) throw ParseError("trailing");
  } catch (const ParseError&) {
    abort_party();
    return {};
  }
  Bytes m = ctx.scheme().xtr(choice_ ? c1 : c0, sk_);
  if (m.size() != msg_len_) {
    abort_party();
    return {};
  }
  finish(std::move(m));
  return {};
}

OtRun ot_run(const SessionConfig& cfg, const Bytes& m0, const Bytes& m1, bool choice) {
  Session sess(cfg);
  OtSender sender(Side::A, m0, m1, sess.party_rng(Side::A));
  OtReceiver receiver(Side::B, choice, m0.size(), sess.party_rng(Side::B));
  OtRun run;
  run.transcript = sess.run(sender, receiver);
  run.received = run.transcript.out_b;
  return run;
}

// ---------------------------------------------------------------------------
// Passive protocols

namespace {

class PassiveXor : public PassiveProtocol {
 public:
  explicit PassiveXor(size_t len) : len_(len) {}

  std::string name() const override { return "xor"; }
  size_t input_len() const override { return len_; }
  size_t rand_bits(Side) const override { return 0; }
  size_t num_messages() const override { return 2; }
  Side mover(size_t k) const override { return k == 0 ? Side::A : Side::B; }

  Bytes next_message(Side role, const Bytes& x, const Bytes&, const std::vector<Bytes>& transcript,
                     CommitScheme&) const override {
    if (x.size() != len_) throw std::invalid_argument("xor: input length");
    (void)role;
    (void)transcript;
    return x;  // each party announces its input; the output determines it anyway
  }

  Bytes output(Side, const Bytes&, const Bytes&, const std::vector<Bytes>& transcript,
               CommitScheme&) const override {
    return xor_bytes(transcript.at(0), transcript.at(1));
  }

  Bytes simulate_peer_message(size_t k, const Bytes& x1, const Bytes&, const Bytes& y,
                              const std::vector<Bytes>&, Rng&, CommitScheme&) const override {
    if (k != 1) throw std::logic_error("xor: peer only sends message 1");
    return xor_bytes(y, x1);  // the transcript is determined by (x1, y)
  }

  Bytes evaluate(const Bytes& x1, const Bytes& x2) const override { return xor_bytes(x1, x2); }

 private:
  size_t len_;
};

// One-gate AND via an embedded oblivious transfer: B's first message carries
// the two keys placed by his bit, A replies with commitments to (0, a), B
// extracts a*b and opens the result to both.
class PassiveAnd : public PassiveProtocol {
 public:
  std::string name() const override { return "and"; }
  size_t input_len() const override { return 1; }
  size_t rand_bits(Side) const override { return 128; }  // seed material
  size_t num_messages() const override { return 3; }
  Side mover(size_t k) const override { return k == 1 ? Side::A : Side::B; }

  Bytes next_message(Side role, const Bytes& x, const Bytes& r,
                     const std::vector<Bytes>& transcript, CommitScheme& scheme) const override {
    if (x.size() != 1 || x[0] > 1) throw std::invalid_argument("and: input must be one bit");
    Rng rng(seed_from_bytes(r));
    size_t k = transcript.size();
    if (k == 0) {
      if (role != Side::B) throw std::logic_error("and: message 0 is B's");
      auto [pk0, pk1, sk] = keys(x[0] == 1, rng, scheme);
      Bytes payload;
      put_chunk(payload, pk0.bits);
      put_chunk(payload, pk1.bits);
      return payload;
    }
    if (k == 1) {
      if (role != Side::A) throw std::logic_error("and: message 1 is A's");
      size_t pos = 0;
      MixedKey pk0 = scheme.key_from_bits(read_chunk(transcript[0], pos));
      MixedKey pk1 = scheme.key_from_bits(read_chunk(transcript[0], pos));
      Bytes r0 = rng.bytes(scheme.randomizer_len(1));
      Bytes r1 = rng.bytes(scheme.randomizer_len(1));
      Bytes payload;
      put_chunk(payload, scheme.commit(pk0, Bytes{0}, r0));
      put_chunk(payload, scheme.commit(pk1, Bytes{x[0]}, r1));
      return payload;
    }
    if (k == 2) {
      if (role != Side::B) throw std::logic_error("and: message 2 is B's");
      auto [pk0, pk1, sk] = keys(x[0] == 1, rng, scheme);
      size_t pos = 0;
      Bytes c0 = read_chunk(transcript[1], pos);
      Bytes c1 = read_chunk(transcript[1], pos);
      Bytes m = scheme.xtr(x[0] ? c1 : c0, sk);
      uint8_t y = (m.size() == 1 && m[0] == 1) ? 1 : 0;
      return Bytes{y};
    }
    throw std::logic_error("and: no message " + std::to_string(k));
  }

  Bytes output(Side, const Bytes&, const Bytes&, const std::vector<Bytes>& transcript,
               CommitScheme&) const override {
    return transcript.at(2);
  }

  Bytes simulate_peer_message(size_t k, const Bytes&, const Bytes&, const Bytes& y,
                              const std::vector<Bytes>&, Rng& rng, CommitScheme& scheme) const override {
    if (k == 0) {
      // the simulator plants an arbitrary choice bit; the flavors are
      // indistinguishable and the result message comes from the ideal output
      auto [pk0, pk1, sk] = keys(false, rng, scheme);
      Bytes payload;
      put_chunk(payload, pk0.bits);
      put_chunk(payload, pk1.bits);
      return payload;
    }
    if (k == 2) return y;
    throw std::logic_error("and: peer sends messages 0 and 2");
  }

  Bytes evaluate(const Bytes& x1, const Bytes& x2) const override {
    return Bytes{static_cast<uint8_t>((x1.at(0) & x2.at(0)) & 1)};
  }

 private:
  struct OtKeys {
    MixedKey pk0, pk1;
    ExtractionKey sk;
  };
  static OtKeys keys(bool choice, Rng& rng, CommitScheme& scheme) {
    KeyPair chosen = scheme.gen_binding(rng);
    MixedKey other = scheme.gen_hiding(rng);
    OtKeys k{choice ? other : chosen.pk, choice ? chosen.pk : other, chosen.sk};
    return k;
  }
};

}  // namespace

std::shared_ptr<const PassiveProtocol> passive_xor(size_t len) {
  return std::make_shared<PassiveXor>(len);
}

std::shared_ptr<const PassiveProtocol> passive_and_via_ot() { return std::make_shared<PassiveAnd>(); }

// ---------------------------------------------------------------------------
// Statements, witnesses, relations

Bytes sfe_statement(Side role, const MixedKey& pk, const BaseCommitment& X, const BaseCommitment& S,
                    const Bytes& s_prime, const std::vector<Bytes>& transcript, const Bytes& m) {
  Bytes out;
  out.push_back(role == Side::A ? 0 : 1);
  put_chunk(out, pk.bits);
  put_chunk(out, X);
  put_chunk(out, S);
  put_chunk(out, s_prime);
  put_u32(out, static_cast<uint32_t>(transcript.size()));
  for (const auto& msg : transcript) put_chunk(out, msg);
  put_chunk(out, m);
  return out;
}

Bytes sfe_witness(const Bytes& x, const Bytes& r_input, const Bytes& s, const Bytes& r_rand) {
  Bytes out;
  put_chunk(out, x);
  put_chunk(out, r_input);
  put_chunk(out, s);
  put_chunk(out, r_rand);
  return out;
}

Relation commitment_opening_relation(CommitScheme* scheme) {
  Relation r;
  r.name = "commitment-opening";
  r.holds = [scheme](const Bytes& xb, const Bytes& wb) -> bool {
    try {
      size_t pos = 0;
      MixedKey pk = scheme->key_from_bits(read_chunk(xb, pos));
      BaseCommitment c = read_chunk(xb, pos);
      if (pos != xb.size()) return false;
      pos = 0;
      Bytes m = read_chunk(wb, pos);
      Bytes rr = read_chunk(wb, pos);
      if (pos != wb.size()) return false;
      return scheme->verify_open(pk, c, m, rr);
    } catch (const std::exception&) {
      return false;
    }
  };
  return r;
}

Bytes opening_statement(const MixedKey& pk, const BaseCommitment& c) {
  Bytes out;
  put_chunk(out, pk.bits);
  put_chunk(out, c);
  return out;
}

Bytes opening_witness(const Bytes& m, const Bytes& r) {
  Bytes out;
  put_chunk(out, m);
  put_chunk(out, r);
  return out;
}

Relation sfe_consistency_relation(std::shared_ptr<const PassiveProtocol> f, CommitScheme* scheme) {
  Relation r;
  r.name = "sfe-consistency-" + f->name();
  r.holds = [f, scheme](const Bytes& xb, const Bytes& wb) -> bool {
    try {
      size_t pos = 0;
      if (xb.empty()) return false;
      Side role = xb[0] == 0 ? Side::A : Side::B;
      pos = 1;
      MixedKey pk = scheme->key_from_bits(read_chunk(xb, pos));
      BaseCommitment X = read_chunk(xb, pos);
      BaseCommitment S = read_chunk(xb, pos);
      Bytes s_prime = read_chunk(xb, pos);
      uint32_t nmsg = read_u32(xb, pos);
      std::vector<Bytes> transcript;
      transcript.reserve(nmsg);
      for (uint32_t i = 0; i < nmsg; ++i) transcript.push_back(read_chunk(xb, pos));
      Bytes m = read_chunk(xb, pos);
      if (pos != xb.size()) return false;

      pos = 0;
      Bytes x = read_chunk(wb, pos);
      Bytes r_input = read_chunk(wb, pos);
      Bytes s = read_chunk(wb, pos);
      Bytes r_rand = read_chunk(wb, pos);
      if (pos != wb.size()) return false;

      if (!scheme->verify_open(pk, X, x, r_input)) return false;
      if (!scheme->verify_open(pk, S, s, r_rand)) return false;
      if (s.size() != s_prime.size()) return false;
      Bytes derived = xor_bytes(s, s_prime);
      return f->next_message(role, x, derived, transcript, *scheme) == m;
    } catch (const std::exception&) {
      return false;
    }
  };
  return r;
}

// ---------------------------------------------------------------------------
// Compiled protocol party. Tags: XC (input commitment), SC (randomness-share
// commitment), coin frames, IM (inner message).

SfeParams make_sfe_params(std::shared_ptr<const PassiveProtocol> f, size_t kappa_bits,
                          bool composed) {
  SfeParams p;
  p.f = std::move(f);
  p.kappa_bits = kappa_bits;
  p.coins = composed ? composed_strong_flip_planner(kappa_bits) : hybrid_planner();
  return p;
}

namespace {

uint32_t input_proof_id(Side s) { return s == Side::A ? kSfeProofInputA : kSfeProofInputB; }
uint32_t rand_proof_id(Side s) { return s == Side::A ? kSfeProofRandA : kSfeProofRandB; }

}  // namespace

Bytes SfeParty::working_input() const {
  return deviation_ == SfeDeviation::SubstituteInput ? wrong_input_ : x_;
}

Bytes SfeParty::working_rand() const {
  if (deviation_ == SfeDeviation::WrongRandomness) return wrong_rand_;
  return xor_bytes(s_, my_s_prime_);
}

bool SfeParty::check_peer_proof(uint32_t proof_id, const Bytes& expected_statement, SessionCtx& ctx) {
  auto out = ctx.zkpk_output(proof_id);
  return out && out->success && out->x == expected_statement;
}

std::vector<Frame> SfeParty::send_inner_or_finish(SessionCtx& ctx) {
  std::vector<Frame> out;
  while (next_msg_ < p_.f->num_messages() && p_.f->mover(next_msg_) == side_) {
    Bytes m = p_.f->next_message(side_, working_input(), working_rand(), inner_, ctx.scheme());
    if (deviation_ == SfeDeviation::FlipInnerMessage && !m.empty()) m[0] ^= 1;
    Bytes stmt = sfe_statement(side_, pk_, my_x_cmt_, my_s_cmt_, my_s_prime_, inner_, m);
    Bytes wit = sfe_witness(x_, r_input_, s_, r_rand_);
    ctx.zkpk_submit(kSfeProofMsgBase + static_cast<uint32_t>(next_msg_), stmt, wit,
                    sfe_consistency_relation(p_.f, &ctx.scheme()).holds);
    inner_.push_back(m);
    out.push_back(Frame{"IM", std::move(m)});
    ++next_msg_;
  }
  if (next_msg_ == p_.f->num_messages() && !done_) {
    finish(p_.f->output(side_, working_input(), working_rand(), inner_, ctx.scheme()));
  }
  return out;
}

std::vector<Frame> SfeParty::step(const Frame* in, SessionCtx& ctx) {
  if (done_) return {};
  return advance(in, ctx);
}

std::vector<Frame> SfeParty::advance(const Frame* in, SessionCtx& ctx) {
  std::vector<Frame> out;
  // phase 0: key flip
  if (phase_ == 0) {
    key_flip_ = CoinSlot(p_.coins(0, p_.kappa_bits, side_, rng_));
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
    const Outcome& kb = key_flip_->result();
    if (!kb) {
      abort_party();
      return out;
    }
    pk_ = ctx.scheme().key_from_bits(*kb);
    if (deviation_ == SfeDeviation::SubstituteInput) {
      wrong_input_ = x_;
      wrong_input_[0] ^= 1;
    }
    if (side_ == Side::A) {
      r_input_ = rng_.bytes(ctx.scheme().randomizer_len(x_.size()));
      my_x_cmt_ = ctx.scheme().commit(pk_, x_, r_input_);
      ctx.zkpk_submit(input_proof_id(side_), opening_statement(pk_, my_x_cmt_),
                      opening_witness(x_, r_input_),
                      commitment_opening_relation(&ctx.scheme()).holds);
      out.push_back(Frame{"XC", my_x_cmt_});
      phase_ = 3;  // await B's input commitment
    } else {
      phase_ = 2;  // await A's input commitment
    }
    return out;
  }
  if (phase_ == 2) {  // B: receive A's XC, reply with own
    if (!in) return out;
    if (in->tag != "XC") {
      abort_party();
      return out;
    }
    peer_x_cmt_ = in->payload;
    if (!check_peer_proof(input_proof_id(peer(side_)), opening_statement(pk_, peer_x_cmt_), ctx)) {
      abort_party();
      return out;
    }
    r_input_ = rng_.bytes(ctx.scheme().randomizer_len(x_.size()));
    my_x_cmt_ = ctx.scheme().commit(pk_, x_, r_input_);
    ctx.zkpk_submit(input_proof_id(side_), opening_statement(pk_, my_x_cmt_),
                    opening_witness(x_, r_input_), commitment_opening_relation(&ctx.scheme()).holds);
    out.push_back(Frame{"XC", my_x_cmt_});
    phase_ = 4;  // await A's SC
    return out;
  }
  if (phase_ == 3) {  // A: receive B's XC, send own SC
    if (!in) return out;
    if (in->tag != "XC") {
      abort_party();
      return out;
    }
    peer_x_cmt_ = in->payload;
    if (!check_peer_proof(input_proof_id(peer(side_)), opening_statement(pk_, peer_x_cmt_), ctx)) {
      abort_party();
      return out;
    }
    s_ = rng_.bits(p_.f->rand_bits(side_));
    r_rand_ = rng_.bytes(ctx.scheme().randomizer_len(s_.size()));
    my_s_cmt_ = ctx.scheme().commit(pk_, s_, r_rand_);
    ctx.zkpk_submit(rand_proof_id(side_), opening_statement(pk_, my_s_cmt_),
                    opening_witness(s_, r_rand_), commitment_opening_relation(&ctx.scheme()).holds);
    out.push_back(Frame{"SC", my_s_cmt_});
    phase_ = 5;  // await B's SC
    return out;
  }
  if (phase_ == 4) {  // B: receive A's SC, reply with own
    if (!in) return out;
    if (in->tag != "SC") {
      abort_party();
      return out;
    }
    peer_s_cmt_ = in->payload;
    if (!check_peer_proof(rand_proof_id(peer(side_)), opening_statement(pk_, peer_s_cmt_), ctx)) {
      abort_party();
      return out;
    }
    s_ = rng_.bits(p_.f->rand_bits(side_));
    r_rand_ = rng_.bytes(ctx.scheme().randomizer_len(s_.size()));
    my_s_cmt_ = ctx.scheme().commit(pk_, s_, r_rand_);
    ctx.zkpk_submit(rand_proof_id(side_), opening_statement(pk_, my_s_cmt_),
                    opening_witness(s_, r_rand_), commitment_opening_relation(&ctx.scheme()).holds);
    out.push_back(Frame{"SC", my_s_cmt_});
    phase_ = 6;
    in = nullptr;
  }
  if (phase_ == 5) {  // A: receive B's SC
    if (!in) return out;
    if (in->tag != "SC") {
      abort_party();
      return out;
    }
    peer_s_cmt_ = in->payload;
    if (!check_peer_proof(rand_proof_id(peer(side_)), opening_statement(pk_, peer_s_cmt_), ctx)) {
      abort_party();
      return out;
    }
    phase_ = 6;
    in = nullptr;
  }
  if (phase_ == 6) {  // first randomness flip (A's share)
    if (p_.f->rand_bits(Side::A) == 0) {  // nothing to flip
      (side_ == Side::A ? my_s_prime_ : peer_s_prime_) = Bytes{};
      phase_ = 7;
    } else {
      if (!rand_flip_) rand_flip_ = CoinSlot(p_.coins(1, p_.f->rand_bits(Side::A), side_, rng_));
      DriveStep d = drive_coin(rand_flip_, in, ctx);
      append_frames(out, d.frames);
      if (!d.finished) {
        if (d.leftover) abort_party();
        return out;
      }
      in = d.leftover;
      const Outcome& coins = rand_flip_->result();
      if (!coins) {
        abort_party();
        return out;
      }
      (side_ == Side::A ? my_s_prime_ : peer_s_prime_) = *coins;
      rand_flip_.reset();
      phase_ = 7;
    }
  }
  if (phase_ == 7) {  // second randomness flip (B's share)
    if (p_.f->rand_bits(Side::B) == 0) {
      (side_ == Side::B ? my_s_prime_ : peer_s_prime_) = Bytes{};
    } else {
      if (!rand_flip_) rand_flip_ = CoinSlot(p_.coins(2, p_.f->rand_bits(Side::B), side_, rng_));
      DriveStep d = drive_coin(rand_flip_, in, ctx);
      append_frames(out, d.frames);
      if (!d.finished) {
        if (d.leftover) abort_party();
        return out;
      }
      in = d.leftover;
      const Outcome& coins = rand_flip_->result();
      if (!coins) {
        abort_party();
        return out;
      }
      (side_ == Side::B ? my_s_prime_ : peer_s_prime_) = *coins;
      rand_flip_.reset();
    }
    if (deviation_ == SfeDeviation::WrongRandomness) wrong_rand_ = rng_.bits(p_.f->rand_bits(side_));
    phase_ = 8;
    // if it is this party's turn to speak first, do it now; a peer message
    // may already be waiting in `in`, so fall through rather than return
    auto frames = send_inner_or_finish(ctx);
    append_frames(out, frames);
    if (done_) return out;
  }
  if (phase_ == 8) {  // inner protocol loop
    if (!in) return out;
    if (in->tag != "IM" || next_msg_ >= p_.f->num_messages() ||
        p_.f->mover(next_msg_) != peer(side_)) {
      abort_party();
      return out;
    }
    Bytes expected_stmt =
        sfe_statement(peer(side_), pk_, peer_x_cmt_, peer_s_cmt_, peer_s_prime_, inner_, in->payload);
    if (!check_peer_proof(kSfeProofMsgBase + static_cast<uint32_t>(next_msg_), expected_stmt, ctx)) {
      abort_party();
      return out;
    }
    inner_.push_back(in->payload);
    ++next_msg_;
    if (next_msg_ == p_.f->num_messages()) {
      finish(p_.f->output(side_, working_input(), working_rand(), inner_, ctx.scheme()));
      return out;
    }
    auto frames = send_inner_or_finish(ctx);
    append_frames(out, frames);
    return out;
  }
  abort_party();
  return out;
}

SfeRun run_sfe_session(const SessionConfig& cfg, const SfeParams& p, const Bytes& x1,
                       const Bytes& x2, SfeDeviation alice_deviation) {
  Session sess(cfg);
  SfeParty alice(Side::A, p, x1, sess.party_rng(Side::A), alice_deviation);
  SfeParty bob(Side::B, p, x2, sess.party_rng(Side::B));
  SfeRun run;
  run.transcript = sess.run(alice, bob);
  run.out_a = run.transcript.out_a;
  run.out_b = run.transcript.out_b;
  return run;
}

// ---------------------------------------------------------------------------
// Ideal-world simulator against Alice.

namespace {

// Bob's seat, ideal world: no real input. Learns Alice's committed values
// through the proof-of-knowledge submissions, answers with placeholder
// commitments and faked proofs, forces her working randomness, and sends the
// peer messages the passive-protocol simulator prescribes.
class SimSfeBob : public Party {
 public:
  SimSfeBob(Side side, SfeParams p, Rng rng, FunctionalityRegistry* reg,
            std::function<Bytes(const Bytes&)> ideal_eval)
      : Party(side), p_(std::move(p)), rng_(rng), reg_(reg), ideal_eval_(std::move(ideal_eval)) {}
  std::unique_ptr<Party> clone() const override { return std::make_unique<SimSfeBob>(*this); }

  const Outcome& ideal_bob_output() const { return ideal_out_; }
  const Bytes& extracted_input() const { return x1_; }

  std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override {
    if (done_) return {};
    std::vector<Frame> out;
    if (phase_ == 0) {
      key_flip_ = CoinSlot(p_.coins(0, p_.kappa_bits, side_, rng_));
      phase_ = 1;
    }
    if (phase_ == 1) {
      DriveStep d = drive_coin(key_flip_, in, ctx);
      append_frames(out, d.frames);
      if (!d.finished) {
        if (d.leftover) deliver_bot();
        return out;
      }
      in = d.leftover;
      const Outcome& kb = key_flip_->result();
      if (!kb) {
        deliver_bot();
        return out;
      }
      pk_ = ctx.scheme().key_from_bits(*kb);
      phase_ = 2;
    }
    if (phase_ == 2) {  // Alice's input commitment
      if (!in) return out;
      if (in->tag != "XC") {
        deliver_bot();
        return out;
      }
      auto sub = reg_->zkpk_submission(kSfeProofInputA);
      auto proof = reg_->zkpk_output(kSfeProofInputA);
      if (!sub || !proof || !proof->success ||
          proof->x != opening_statement(pk_, in->payload)) {
        deliver_bot();
        return out;
      }
      size_t pos = 0;
      x1_ = read_chunk(sub->w, pos);  // her proven input
      alice_x_cmt_ = in->payload;
      // placeholder commitment; under a hiding key it reveals nothing
      Bytes zeros(p_.f->input_len(), 0);
      Bytes r = rng_.bytes(ctx.scheme().randomizer_len(zeros.size()));
      my_x_cmt_ = ctx.scheme().commit(pk_, zeros, r);
      reg_->fake_zkpk(kSfeProofInputB, opening_statement(pk_, my_x_cmt_), true);
      out.push_back(Frame{"XC", my_x_cmt_});
      phase_ = 3;
      return out;
    }
    if (phase_ == 3) {  // Alice's randomness-share commitment
      if (!in) return out;
      if (in->tag != "SC") {
        deliver_bot();
        return out;
      }
      auto sub = reg_->zkpk_submission(kSfeProofRandA);
      auto proof = reg_->zkpk_output(kSfeProofRandA);
      if (!sub || !proof || !proof->success ||
          proof->x != opening_statement(pk_, in->payload)) {
        deliver_bot();
        return out;
      }
      size_t pos = 0;
      s1_ = read_chunk(sub->w, pos);
      alice_s_cmt_ = in->payload;
      Bytes zeros(bytes_for_bits(p_.f->rand_bits(Side::B)), 0);
      Bytes r = rng_.bytes(ctx.scheme().randomizer_len(zeros.size()));
      my_s_cmt_ = ctx.scheme().commit(pk_, zeros, r);
      reg_->fake_zkpk(kSfeProofRandB, opening_statement(pk_, my_s_cmt_), true);
      // sample her working randomness now and force the public share to match
      r1_ = rng_.bits(p_.f->rand_bits(Side::A));
      if (!r1_.empty() && s1_.size() == r1_.size()) reg_->force_coin(1, xor_bytes(s1_, r1_));
      out.push_back(Frame{"SC", my_s_cmt_});
      phase_ = 4;
      in = nullptr;
    }
    if (phase_ == 4) {  // first randomness flip
      if (p_.f->rand_bits(Side::A) == 0) {
        s1_prime_ = Bytes{};
        phase_ = 5;
      } else {
        if (!rand_flip_) rand_flip_ = CoinSlot(p_.coins(1, p_.f->rand_bits(Side::A), side_, rng_));
        DriveStep d = drive_coin(rand_flip_, in, ctx);
        append_frames(out, d.frames);
        if (!d.finished) {
          if (d.leftover) deliver_bot();
          return out;
        }
        in = d.leftover;
        if (!rand_flip_->result()) {
          deliver_bot();
          return out;
        }
        s1_prime_ = *rand_flip_->result();
        rand_flip_.reset();
        phase_ = 5;
      }
    }
    if (phase_ == 5) {  // second randomness flip
      if (p_.f->rand_bits(Side::B) == 0) {
        s2_prime_ = Bytes{};
      } else {
        if (!rand_flip_) rand_flip_ = CoinSlot(p_.coins(2, p_.f->rand_bits(Side::B), side_, rng_));
        DriveStep d = drive_coin(rand_flip_, in, ctx);
        append_frames(out, d.frames);
        if (!d.finished) {
          if (d.leftover) deliver_bot();
          return out;
        }
        in = d.leftover;
        if (!rand_flip_->result()) {
          deliver_bot();
          return out;
        }
        s2_prime_ = *rand_flip_->result();
        rand_flip_.reset();
      }
      // query the ideal evaluation with her extracted input
      y_ = ideal_eval_(x1_);
      phase_ = 6;
      auto frames = emit_sim_messages(ctx);
      append_frames(out, frames);
      if (done_) return out;
    }
    if (phase_ == 6) {  // inner loop: cross-check Alice, play the simulator's lines
      if (!in) return out;
      if (in->tag != "IM" || next_msg_ >= p_.f->num_messages() ||
          p_.f->mover(next_msg_) != Side::A) {
        deliver_bot();
        return out;
      }
      // her only consistent message is the one the passive protocol
      // prescribes for (x1, r1) on this transcript
      Bytes expected = p_.f->next_message(Side::A, x1_, r1_, inner_, ctx.scheme());
      Bytes expected_stmt =
          sfe_statement(Side::A, pk_, alice_x_cmt_, alice_s_cmt_, s1_prime_, inner_, in->payload);
      auto proof = reg_->zkpk_output(kSfeProofMsgBase + static_cast<uint32_t>(next_msg_));
      if (in->payload != expected || !proof || !proof->success || proof->x != expected_stmt) {
        deliver_bot();
        return out;
      }
      inner_.push_back(in->payload);
      ++next_msg_;
      auto frames = emit_sim_messages(ctx);
      append_frames(out, frames);
      return out;
    }
    deliver_bot();
    return out;
  }

 private:
  // second input top: the honest party's ideal output is y
  void deliver_top() {
    ideal_out_ = y_;
    finish(y_);
  }
  void deliver_bot() {
    ideal_out_ = std::nullopt;
    abort_party();
  }

  std::vector<Frame> emit_sim_messages(SessionCtx& ctx) {
    std::vector<Frame> out;
    while (next_msg_ < p_.f->num_messages() && p_.f->mover(next_msg_) == Side::B) {
      Bytes m = p_.f->simulate_peer_message(next_msg_, x1_, r1_, y_, inner_, rng_, ctx.scheme());
      Bytes stmt = sfe_statement(Side::B, pk_, my_x_cmt_, my_s_cmt_, s2_prime_, inner_, m);
      reg_->fake_zkpk(kSfeProofMsgBase + static_cast<uint32_t>(next_msg_), stmt, true);
      inner_.push_back(m);
      out.push_back(Frame{"IM", std::move(m)});
      ++next_msg_;
    }
    if (next_msg_ == p_.f->num_messages() && !done_) deliver_top();
    return out;
  }

  SfeParams p_;
  Rng rng_;
  FunctionalityRegistry* reg_;
  std::function<Bytes(const Bytes&)> ideal_eval_;
  int phase_ = 0;
  CoinSlot key_flip_, rand_flip_;
  MixedKey pk_;
  Bytes x1_, s1_, r1_, s1_prime_, s2_prime_, y_;
  BaseCommitment alice_x_cmt_, alice_s_cmt_, my_x_cmt_, my_s_cmt_;
  std::vector<Bytes> inner_;
  size_t next_msg_ = 0;
  Outcome ideal_out_;
};

}  // namespace

SfeSimResult sfe_simulate_alice(const SfeAliceFactory& alice, const SfeParams& p, const Bytes& x2,
                                const SessionConfig& cfg) {
  Session sess(cfg);
  auto adv = alice(Side::A, sess.party_rng(Side::A));
  IdealSfe functionality{[&p](const Bytes& a, const Bytes& b) { return p.f->evaluate(a, b); }};
  SimSfeBob sim(Side::B, p, sess.party_rng(Side::B), &sess.registry(),
                [&functionality, x2](const Bytes& x1) {
                  return functionality.dishonest_first_output(x1, x2);
                });
  SfeSimResult res;
  res.transcript = sess.run(*adv, sim);
  res.ideal_bob_output = sim.ideal_bob_output();
  res.extracted_input = sim.extracted_input();
  return res;
}

}  // namespace scf
