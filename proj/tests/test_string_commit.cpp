#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "scf/batch.hpp"
#include "scf/stats.hpp"
#include "scf/string_commit.hpp"

using namespace scf;

namespace {

struct OpenRun {
  Transcript transcript;
  Outcome receiver_out;
};

OpenRun run_open_session(uint64_t seed, const SssParams& p, const Message& m, SenderOptions opts,
                         bool binding_key) {
  SessionConfig cfg;
  cfg.seed = seed;
  Session sess(cfg);
  Rng setup(mix_seed(seed, 5));
  MixedKey pk = binding_key ? sess.scheme().gen_binding(setup).pk : sess.scheme().gen_hiding(setup);
  CommitSender sender(Side::A, p, m, pk, hybrid_planner(), sess.party_rng(Side::A), opts);
  CommitReceiver receiver(Side::B, p, pk, hybrid_planner(), sess.party_rng(Side::B));
  OpenRun r;
  r.transcript = sess.run(sender, receiver);
  r.receiver_out = r.transcript.out_b;
  return r;
}

}  // namespace

TEST_CASE("completeness: honest commit and open never aborts and returns m") {
  SssParams p(2, FieldSpec::gf2ext(16));
  Field f(p.field);
  Rng rng(11);
  for (int t = 0; t < 1000; ++t) {
    Message m = random_message(p, rng);
    OpenRun r = run_open_session(1000 + t, p, m, {}, t % 2 == 0);
    REQUIRE(r.receiver_out.has_value());
    CHECK(*r.receiver_out == serialize_shares(f, m));
  }
}

TEST_CASE("two commitments to the same message differ (fresh randomness)") {
  SssParams p(2, FieldSpec::gf2ext(16));
  SessionConfig cfg;
  Session sess(cfg);
  Rng rng(12);
  MixedKey pk = sess.scheme().gen_hiding(rng);
  Message m = random_message(p, rng);
  auto [st1, M1] = commit_phase(p, m, pk, sess.scheme(), rng);
  auto [st2, M2] = commit_phase(p, m, pk, sess.scheme(), rng);
  CHECK(M1.cells != M2.cells);
  // and every cell decommits
  Field f(p.field);
  for (uint32_t i = 0; i < p.Sigma; ++i)
    CHECK(sess.scheme().verify_open(pk, M1.cells[i], f.serialize(st1.shares[i]), st1.randomizers[i]));
}

TEST_CASE("inconsistent announced shares abort before any subset is flipped") {
  SssParams p(2, FieldSpec::gf2ext(16));
  SessionConfig cfg;
  cfg.seed = 77;
  Session sess(cfg);
  Rng setup(1);
  MixedKey pk = sess.scheme().gen_hiding(setup);

  // a sender that garbles its announced shares
  class GarblingSender : public CommitSender {
   public:
    using CommitSender::CommitSender;
    std::vector<Frame> step(const Frame* in, SessionCtx& ctx) override {
      auto out = CommitSender::step(in, ctx);
      for (auto& fr : out)
        if (fr.tag == "SHARES") fr.payload[0] ^= 1;
      return out;
    }
    std::unique_ptr<Party> clone() const override { return std::make_unique<GarblingSender>(*this); }
  };

  GarblingSender sender(Side::A, p, random_message(p, setup), pk, hybrid_planner(),
                        sess.party_rng(Side::A), SenderOptions{});
  CommitReceiver receiver(Side::B, p, pk, hybrid_planner(), sess.party_rng(Side::B));
  Transcript t = sess.run(sender, receiver);
  CHECK(is_abort(t.out_b));
  // no subset flip was recorded: the receiver stopped at the consistency check
  for (const auto& f : t.frames) CHECK(f.sender != 'F');
}

TEST_CASE("cheating committer with d bad cells is caught except with the hypergeometric rate") {
  // exact check at small parameters across several d values
  SssParams p(2, FieldSpec::gf2ext(8));  // sigma=2, Sigma=8
  Rng rng(13);
  for (uint32_t d : {2u, 3u, 5u}) {
    SenderOptions opts;
    opts.behavior = SenderBehavior::CorruptCells;
    opts.corrupt_cells = d;
    uint64_t n = 4000, accepted = 0;
    for (uint64_t t = 0; t < n; ++t) {
      Message m = random_message(p, rng);
      OpenRun r = run_open_session(mix_seed(14, t * 8 + d), p, m, opts, true);
      if (r.receiver_out) ++accepted;
    }
    double exact = hypergeom_avoid_probability(p.Sigma, p.sigma, d);
    CHECK(within_binomial_sd(accepted, n, exact, 3.5));
  }
}

TEST_CASE("opening toward another message can only survive by hitting the agreement set") {
  SssParams p(2, FieldSpec::gf2ext(8));
  Field f(p.field);
  Rng rng(15);
  uint64_t n = 3000, accepted = 0, accepted_bound_checks = 0;
  for (uint64_t t = 0; t < n; ++t) {
    Message m = random_message(p, rng);
    Message other = m;
    other[0] = f.add(other[0], f.one());
    SenderOptions opts;
    opts.behavior = SenderBehavior::OpenOtherMessage;
    opts.other_message = other;
    OpenRun r = run_open_session(mix_seed(16, t), p, m, opts, true);
    if (r.receiver_out) {
      ++accepted;
      CHECK(*r.receiver_out == serialize_shares(f, other));
    }
    ++accepted_bound_checks;
  }
  // the two codewords share the randomizer, so they agree on >= sigma cells;
  // the disagreement count d >= 2*sigma+1 caps acceptance well below (3/4)^sigma
  double bound = std::pow(0.75, p.sigma);
  CHECK(static_cast<double>(accepted) / n <= bound);
  CHECK(accepted_bound_checks == n);
}

TEST_CASE("extraction: honest commitments extract to the committed message") {
  SssParams p(2, FieldSpec::gf2ext(16));
  SessionConfig cfg;
  Session sess(cfg);
  Rng rng(17);
  KeyPair kp = sess.scheme().gen_binding(rng);
  for (int t = 0; t < 200; ++t) {
    Message m = random_message(p, rng);
    auto [st, M] = commit_phase(p, m, kp.pk, sess.scheme(), rng);
    CHECK(extract_commit(p, M, kp.sk, sess.scheme()) == m);
  }
}

TEST_CASE("extraction decodes through up to sigma corrupted cells") {
  SssParams p(2, FieldSpec::gfp(13));
  oracle::CodewordTable table(p);
  SessionConfig cfg;
  Session sess(cfg);
  Rng rng(18);
  Field f(p.field);
  for (int t = 0; t < 300; ++t) {
    Message m = random_message(p, rng);
    auto [st, M] = commit_phase(p, m, sess.scheme().gen_binding(rng).pk, sess.scheme(), rng);
    // corrupt up to sigma cells by recommitting wrong values under the same key
    KeyPair kp = sess.scheme().gen_binding(rng);
    auto [st2, M2] = commit_phase(p, m, kp.pk, sess.scheme(), rng);
    uint32_t errors = static_cast<uint32_t>(rng.uniform(p.sigma + 1));
    ShareVector noisy = st2.shares;
    for (uint32_t e = 0; e < errors; ++e) {
      Bytes msg = f.serialize(f.add(st2.shares[e], f.one()));
      Bytes r = rng.bytes(sess.scheme().randomizer_len(msg.size()));
      M2.cells[e] = sess.scheme().commit(kp.pk, msg, r);
      noisy[e] = f.add(st2.shares[e], f.one());
    }
    Message got = extract_commit(p, M2, kp.sk, sess.scheme());
    auto ref = table.nearest(noisy, p.sigma);
    REQUIRE(ref.has_value());
    CHECK(got == ref->message);
    CHECK(got == m);  // within the unique radius the original survives
  }
}

TEST_CASE("extraction failure maps to the all-zero message") {
  SssParams p(1, FieldSpec::gfp(13));
  SessionConfig cfg;
  Session sess(cfg);
  Rng rng(19);
  KeyPair kp = sess.scheme().gen_binding(rng);
  // commit to a vector far from every codeword: distance > sigma from all
  oracle::CodewordTable table(p);
  ShareVector far(p.Sigma);
  Field f(p.field);
  bool found = false;
  while (!found) {
    for (auto& x : far) x = f.sample(rng);
    found = !table.nearest(far, p.sigma).has_value();
  }
  StringCommitment M;
  for (uint32_t i = 0; i < p.Sigma; ++i) {
    Bytes msg = f.serialize(far[i]);
    M.cells.push_back(sess.scheme().commit(kp.pk, msg, rng.bytes(sess.scheme().randomizer_len(1))));
  }
  CHECK(extract_commit(p, M, kp.sk, sess.scheme()) == Message{f.zero()});
}

TEST_CASE("accepting open equals extraction except with the bounded cheat rate") {
  SssParams p(2, FieldSpec::gf2ext(8));
  Field f(p.field);
  Rng rng(20);
  uint64_t n = 2000, accepted_mismatch = 0;
  for (uint64_t t = 0; t < n; ++t) {
    SessionConfig cfg;
    cfg.seed = mix_seed(21, t);
    Session sess(cfg);
    Rng setup(mix_seed(cfg.seed, 5));
    KeyPair kp = sess.scheme().gen_binding(setup);
    Message m = random_message(p, setup);
    Message other = m;
    other[0] = f.add(other[0], f.one());
    SenderOptions opts;
    opts.behavior = SenderBehavior::OpenOtherMessage;
    opts.other_message = other;
    CommitSender sender(Side::A, p, m, kp.pk, hybrid_planner(), sess.party_rng(Side::A), opts);
    CommitReceiver receiver(Side::B, p, kp.pk, hybrid_planner(), sess.party_rng(Side::B));
    // capture the commitment cells from the transcript for extraction
    Transcript tr = sess.run(sender, receiver);
    if (!tr.out_b) continue;
    StringCommitment M = StringCommitment::deserialize(tr.frames[0].payload);
    Message extracted = extract_commit(p, M, kp.sk, sess.scheme());
    if (serialize_shares(f, extracted) != *tr.out_b) ++accepted_mismatch;
  }
  CHECK(static_cast<double>(accepted_mismatch) / n <= std::pow(0.75, p.sigma));
}

TEST_CASE("equivocal commitment transcribes like an honest one and opens to anything") {
  SssParams p(2, FieldSpec::gf2ext(16));
  Field f(p.field);
  for (uint64_t t = 0; t < 300; ++t) {
    SessionConfig cfg;
    cfg.seed = mix_seed(22, t);
    Session sess(cfg);
    Rng setup(mix_seed(cfg.seed, 5));
    Rng sim_rng(mix_seed(cfg.seed, 6));
    MixedKey pk = sess.scheme().gen_hiding(setup);
    SubsetS S = random_subset(p.Sigma, p.sigma, sim_rng);
    sess.registry().force_coin(0, coins_for_subset(S, p.Sigma, p.sigma, sim_rng));
    Message initial = random_message(p, setup);
    Message substitute = random_message(p, setup);  // includes the all-zero case eventually
    EquivocalSender sender(Side::A, p, EquivocationTrapdoor{S}, initial, substitute, pk,
                           hybrid_planner(), sess.party_rng(Side::A));
    CommitReceiver receiver(Side::B, p, pk, hybrid_planner(), sess.party_rng(Side::B));
    Transcript tr = sess.run(sender, receiver);
    REQUIRE(tr.out_b.has_value());
    CHECK(*tr.out_b == serialize_shares(f, substitute));
  }
}

TEST_CASE("equivocal open to the initial message reduces to an honest opening") {
  SssParams p(2, FieldSpec::gf2ext(16));
  SessionConfig cfg;
  cfg.seed = 23;
  Session sess(cfg);
  Rng rng(24);
  MixedKey pk = sess.scheme().gen_hiding(rng);
  Message m = random_message(p, rng);
  SubsetS S = random_subset(p.Sigma, p.sigma, rng);
  auto [sim, M] = equivocal_commit(p, EquivocationTrapdoor{S}, m, pk, sess.scheme(), rng);
  ShareVector same = equivocal_shares(p, sim, m);
  CHECK(same == sim.inner.shares);  // the interpolant equals the original polynomial
  CHECK(sss_consistent(p, same));
}

TEST_CASE("equivocal announcements always pass the degree check") {
  SssParams p(3, FieldSpec::gf2ext(16));
  SessionConfig cfg;
  Session sess(cfg);
  Rng rng(25);
  MixedKey pk = sess.scheme().gen_hiding(rng);
  for (int t = 0; t < 100; ++t) {
    SubsetS S = random_subset(p.Sigma, p.sigma, rng);
    auto [sim, M] = equivocal_commit(p, EquivocationTrapdoor{S}, random_message(p, rng), pk,
                                     sess.scheme(), rng);
    ShareVector ann = equivocal_shares(p, sim, random_message(p, rng));
    CHECK(sss_consistent(p, ann));
    // shares at the trapdoor subset agree with the committed cells
    for (uint32_t pos : S.positions) CHECK(ann[pos - 1] == sim.inner.shares[pos - 1]);
  }
}

TEST_CASE("equivocated openings are statistically like honest ones on projected statistics") {
  SssParams p(2, FieldSpec::gfp(13));
  Field f(p.field);
  const uint64_t kRuns = 100000;
  // projections: announced share value at position 1 and the flipped subset
  std::vector<uint64_t> honest_share(13, 0), equiv_share(13, 0);
  std::vector<uint64_t> honest_subset(28, 0), equiv_subset(28, 0);

  auto honest = run_batch<std::pair<uint32_t, uint32_t>>(
      kRuns, 31, ExecMode::Parallel, [&](uint64_t, uint64_t seed) {
        SessionConfig cfg;
        cfg.seed = seed;
        Session sess(cfg);
        Rng setup(mix_seed(seed, 5));
        MixedKey pk = sess.scheme().gen_hiding(setup);
        Message m = random_message(p, setup);
        CommitSender sender(Side::A, p, m, pk, hybrid_planner(), sess.party_rng(Side::A));
        CommitReceiver receiver(Side::B, p, pk, hybrid_planner(), sess.party_rng(Side::B));
        sess.run(sender, receiver);
        return std::make_pair(sender.announced()[0].v,
                              static_cast<uint32_t>(subset_rank(*receiver.subset(), p.Sigma)));
      });
  auto equiv = run_batch<std::pair<uint32_t, uint32_t>>(
      kRuns, 32, ExecMode::Parallel, [&](uint64_t, uint64_t seed) {
        SessionConfig cfg;
        cfg.seed = seed;
        Session sess(cfg);
        Rng setup(mix_seed(seed, 5));
        Rng sim_rng(mix_seed(seed, 6));
        MixedKey pk = sess.scheme().gen_hiding(setup);
        SubsetS S = random_subset(p.Sigma, p.sigma, sim_rng);
        sess.registry().force_coin(0, coins_for_subset(S, p.Sigma, p.sigma, sim_rng));
        Message initial = random_message(p, setup);
        Message substitute = random_message(p, setup);
        EquivocalSender sender(Side::A, p, EquivocationTrapdoor{S}, initial, substitute, pk,
                               hybrid_planner(), sess.party_rng(Side::A));
        CommitReceiver receiver(Side::B, p, pk, hybrid_planner(), sess.party_rng(Side::B));
        Transcript tr = sess.run(sender, receiver);
        REQUIRE(tr.out_b.has_value());
        size_t pos = 0;
        return std::make_pair(f.deserialize(tr.frames[1].payload, pos).v,
                              static_cast<uint32_t>(subset_rank(*receiver.subset(), p.Sigma)));
      });
  for (auto& [sh, su] : honest) {
    honest_share[sh]++;
    honest_subset[su]++;
  }
  for (auto& [sh, su] : equiv) {
    equiv_share[sh]++;
    equiv_subset[su]++;
  }
  CHECK(tv_distance(honest_share, equiv_share) < 0.02);
  CHECK(tv_distance(honest_subset, equiv_subset) < 0.02);
}
