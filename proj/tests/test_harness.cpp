#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scf/coinflip.hpp"
#include "scf/harness.hpp"
#include "scf/stats.hpp"

using namespace scf;

namespace {

// trivial ping/pong programs for engine-level tests
class Pinger : public Party {
 public:
  using Party::Party;
  std::vector<Frame> step(const Frame* in, SessionCtx&) override {
    if (done_) return {};
    if (phase_ == 0) {
      ++phase_;
      return {Frame{"PING", {1}}};
    }
    if (in && in->tag == "PONG") {
      finish(in->payload);
      return {};
    }
    return {};
  }
  std::unique_ptr<Party> clone() const override { return std::make_unique<Pinger>(*this); }

 private:
  int phase_ = 0;
};

class Ponger : public Party {
 public:
  using Party::Party;
  std::vector<Frame> step(const Frame* in, SessionCtx&) override {
    if (done_ || !in) return {};
    if (in->tag == "PING") {
      finish({2});
      return {Frame{"PONG", {2}}};
    }
    abort_party();
    return {};
  }
  std::unique_ptr<Party> clone() const override { return std::make_unique<Ponger>(*this); }
};

class Mute : public Party {
 public:
  using Party::Party;
  std::vector<Frame> step(const Frame*, SessionCtx&) override { return {}; }
  std::unique_ptr<Party> clone() const override { return std::make_unique<Mute>(*this); }
};

class BigSender : public Party {
 public:
  using Party::Party;
  std::vector<Frame> step(const Frame*, SessionCtx& ctx) override {
    if (done_) return {};
    finish({});
    return {Frame{"HUGE", Bytes(ctx.max_frame_bytes() + 1, 0)}};
  }
  std::unique_ptr<Party> clone() const override { return std::make_unique<BigSender>(*this); }
};

}  // namespace

TEST_CASE("engine runs a session and records ordered frames") {
  Session sess(SessionConfig{});
  Pinger a(Side::A);
  Ponger b(Side::B);
  Transcript t = sess.run(a, b);
  REQUIRE(t.frames.size() == 2);
  CHECK(t.frames[0].tag == "PING");
  CHECK(t.frames[0].sender == 'A');
  CHECK(t.frames[1].tag == "PONG");
  CHECK(t.frames[0].seq == 0);
  CHECK(t.frames[1].seq == 1);  // delivery in send order
  CHECK(t.out_a == Outcome{Bytes{2}});
  CHECK(t.out_b == Outcome{Bytes{2}});
}

TEST_CASE("deadlocked sessions are detected and reported as mutual abort") {
  Session sess(SessionConfig{});
  Mute a(Side::A), b(Side::B);
  Transcript t = sess.run(a, b);
  CHECK(t.engine_note == "deadlock");
  CHECK(is_abort(t.out_a));
  CHECK(is_abort(t.out_b));
}

TEST_CASE("oversized frames end the session with counterparty abort") {
  Session sess(SessionConfig{});
  BigSender a(Side::A);
  Ponger b(Side::B);
  Transcript t = sess.run(a, b);
  CHECK(t.engine_note.find("oversized") != std::string::npos);
  CHECK(is_abort(t.out_b));
  REQUIRE(!t.frames.empty());
  CHECK(t.frames.back().tag.rfind("!OVERSIZED", 0) == 0);
}

TEST_CASE("ideal coin functionality: honest and dishonest branch tables") {
  // lambda = 1, both coin values, both second inputs
  for (uint64_t seed = 0; seed < 32; ++seed) {
    Rng rng(seed);
    IdealCoin coin(1, rng);
    const Bytes& h = coin.honest_output();
    REQUIRE(h.size() == 1);
    CHECK((h[0] == 0 || h[0] == 1));
    CHECK(coin.dishonest_first_output() == h);
    CHECK(coin.counterpart_output(true) == Outcome{h});
    CHECK(coin.counterpart_output(false) == std::nullopt);
  }
  // uniformity of the honest output
  std::vector<uint64_t> counts(2, 0);
  Rng rng(99);
  for (int i = 0; i < 20000; ++i) counts[IdealCoin(1, rng).honest_output()[0]]++;
  CHECK(chi_square_uniform_pvalue(counts) > 1e-3);
}

TEST_CASE("registry coin: fires only on the second request; veto reaches only the honest side") {
  FunctionalityRegistry reg(42);
  CHECK_FALSE(reg.coin(0, 8, Side::A).has_value());  // waiting for the peer
  auto b = reg.coin(0, 8, Side::B);
  auto a = reg.coin(0, 8, Side::A);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(*a == *b);
  REQUIRE(a->has_value());
  CHECK((*a)->size() == 1);

  FunctionalityRegistry reg2(43);
  reg2.hook_coin(1, Side::A, [](const Bytes&) { return false; });  // dishonest Alice vetoes
  reg2.coin(1, 8, Side::B);
  auto da = reg2.coin(1, 8, Side::A);
  auto db = reg2.coin(1, 8, Side::B);
  REQUIRE(da.has_value());
  REQUIRE(db.has_value());
  CHECK(da->has_value());  // the dishonest side always learns h first
  CHECK(is_abort(*db));

  FunctionalityRegistry reg3(44);
  reg3.force_coin(2, Bytes{0xAB});
  reg3.coin(2, 8, Side::A);
  CHECK(*reg3.coin(2, 8, Side::B) == Outcome{Bytes{0xAB}});
}

TEST_CASE("registry proof instance follows the functionality contract") {
  FunctionalityRegistry reg(45);
  RelationFn rel = [](const Bytes& x, const Bytes& w) { return x == w; };
  CHECK_FALSE(reg.zkpk_output(9).has_value());
  reg.zkpk_submit(9, Bytes{1}, Bytes{1}, rel);
  auto out = reg.zkpk_output(9);
  REQUIRE(out.has_value());
  CHECK(out->success);
  CHECK(out->x == Bytes{1});
  // witness inspection capability
  auto sub = reg.zkpk_submission(9);
  REQUIRE(sub.has_value());
  CHECK(sub->w == Bytes{1});

  reg.zkpk_submit(10, Bytes{1}, Bytes{2}, rel);
  CHECK_FALSE(reg.zkpk_output(10)->success);
}

TEST_CASE("ideal zkpk and sfe figure semantics") {
  IdealZkpk zk{[](const Bytes& x, const Bytes& w) { return x == w; }};
  CHECK(zk.run(Bytes{7}, Bytes{7}) == std::make_pair(Bytes{7}, true));
  CHECK(zk.run(Bytes{7}, Bytes{8}) == std::make_pair(Bytes{7}, false));

  IdealSfe sfe{[](const Bytes& a, const Bytes& b) { return xor_bytes(a, b); }};
  CHECK(sfe.honest_run(Bytes{1}, Bytes{0}) == Bytes{1});
  Bytes y = sfe.dishonest_first_output(Bytes{1}, Bytes{1});
  CHECK(y == Bytes{0});
  CHECK(sfe.counterpart_output(y, true) == Outcome{y});
  CHECK(sfe.counterpart_output(y, false) == std::nullopt);
}

TEST_CASE("snapshot and restore reproduce behavior exactly") {
  SessionConfig cfg;
  Session sess(cfg);
  BlumAlice alice(Side::A, BlumParams{1}, sess.party_rng(Side::A));
  auto first = alice.step(nullptr, sess.ctx());
  REQUIRE(first.size() == 2);

  Snapshot snap = snapshot_party(alice, sess.ctx());
  Frame b0{"BB", Bytes{0}};
  auto r1 = restore_party(snap)->step(&b0, sess.ctx());
  auto r2 = restore_party(snap)->step(&b0, sess.ctx());
  REQUIRE(!r1.empty());
  CHECK(r1[0].tag == "BO");
  CHECK(r1[0].payload == r2[0].payload);  // identical continuation under identical input

  // different inputs give independent continuations revealing the same bit
  Frame b1{"BB", Bytes{1}};
  auto r3 = restore_party(snap)->step(&b1, sess.ctx());
  REQUIRE(!r3.empty());
  CHECK(r3[0].payload[0] == r1[0].payload[0]);  // same committed bit either way
}

TEST_CASE("quantum-realistic mode forbids snapshots deterministically") {
  SessionConfig cfg;
  cfg.quantum_realistic = true;
  Session sess(cfg);
  BlumAlice alice(Side::A, BlumParams{1}, sess.party_rng(Side::A));
  alice.step(nullptr, sess.ctx());
  CHECK_THROWS_AS(snapshot_party(alice, sess.ctx()), RewindingForbidden);
}

TEST_CASE("transcript text round-trips exactly") {
  Transcript t;
  t.add_header("proto", "coin-fr");
  t.add_header("seed", "17");
  t.frames.push_back({0, 'A', "CMT", Bytes{0xde, 0xad}});
  t.frames.push_back({1, 'F', "COIN0", {}});
  t.frames.push_back({2, 'B', "BV", Bytes{0x01}});
  t.out_a = Bytes{0x2a};
  t.out_b = std::nullopt;
  t.engine_note = "";
  std::string text = t.to_text();
  Transcript back = Transcript::from_text(text);
  CHECK(back.header == t.header);
  CHECK(back.same_frames_and_outcomes(t));
  CHECK(Transcript::from_text(back.to_text()).to_text() == text);
  CHECK_THROWS_AS(Transcript::from_text("garbage"), ParseError);
}

TEST_CASE("composed coin driver: namespacing round trip") {
  // two blum drivers wired back-to-back outside any engine
  SessionConfig cfg;
  Session sess(cfg);
  Rng ra = sess.party_rng(Side::A), rb = sess.party_rng(Side::B);
  auto mk = composed_blum_planner();
  auto da = mk(3, 4, Side::A, ra);
  auto db = mk(3, 4, Side::B, rb);
  std::vector<Frame> to_b = da->step(nullptr, sess.ctx());
  REQUIRE(!to_b.empty());
  CHECK(to_b[0].tag.rfind("~3.", 0) == 0);
  // shuttle frames until both finish
  std::vector<Frame> to_a;
  int guard = 0;
  while ((!da->finished() || !db->finished()) && guard++ < 100) {
    to_a.clear();
    for (const Frame& f : to_b) {
      auto r = db->step(&f, sess.ctx());
      for (auto& fr : r) to_a.push_back(std::move(fr));
    }
    to_b.clear();
    for (const Frame& f : to_a) {
      auto r = da->step(&f, sess.ctx());
      for (auto& fr : r) to_b.push_back(std::move(fr));
    }
  }
  REQUIRE(da->finished());
  REQUIRE(db->finished());
  REQUIRE(da->result().has_value());
  CHECK(da->result() == db->result());
  CHECK(da->result()->size() == 1);  // 4 bits
}
