#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "scf/batch.hpp"
#include "scf/stats.hpp"
#include "scf/zkpk.hpp"

using namespace scf;

namespace {

std::vector<Permutation> all_permutations(uint32_t v) {
  Permutation p(v);
  for (uint32_t i = 0; i < v; ++i) p[i] = i;
  std::vector<Permutation> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

SessionConfig cfg_for(uint64_t seed) {
  SessionConfig cfg;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("permutation utilities") {
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    Permutation p = random_permutation(5, rng);
    CHECK(is_permutation(p));
    Permutation inv = invert_permutation(p);
    Permutation id = compose_permutations(p, inv);
    for (uint32_t i = 0; i < 5; ++i) CHECK(id[i] == i);
  }
  CHECK_FALSE(is_permutation({0, 0, 2}));
  CHECK_FALSE(deserialize_permutation(Bytes{9, 9}, 1).has_value());
}

TEST_CASE("graph relation and instance serialization") {
  Rng rng(2);
  auto [x, phi] = random_gi_instance(5, 0.5, rng);
  Relation rel = graph_iso_relation();
  CHECK(rel.holds(x.serialize(), serialize_permutation(phi)));
  Permutation other = random_permutation(5, rng);
  if (apply_permutation(x.g0, 5, other) != x.g1)
    CHECK_FALSE(rel.holds(x.serialize(), serialize_permutation(other)));
  CHECK_FALSE(rel.holds(x.serialize(), Bytes{0xff}));
  CHECK_FALSE(rel.holds(Bytes{1, 2}, serialize_permutation(phi)));
  GraphIsoInstance back = GraphIsoInstance::deserialize(x.serialize());
  CHECK(back.g0 == x.g0);
  CHECK(back.g1 == x.g1);
}

TEST_CASE("instance text files round-trip") {
  Rng rng(3);
  auto [x, phi] = random_gi_instance(4, 0.4, rng);
  std::string text = gi_instance_to_text(x, &phi);
  auto [back, wit] = gi_instance_from_text(text);
  CHECK(back.g0 == x.g0);
  CHECK(back.g1 == x.g1);
  REQUIRE(wit.has_value());
  CHECK(*wit == phi);
  CHECK_THROWS_AS(gi_instance_from_text("v 2\ng0 01\n"), ParseError);
}

TEST_CASE("base encoding: completeness for every instance, witness and challenge at v=3") {
  auto perms = all_permutations(3);
  auto enc = gi_encoding(3);
  Rng rng(4);
  // every planted instance over every witness and encoding permutation
  for (const Permutation& phi : perms) {
    GraphIsoInstance x;
    x.v = 3;
    x.g0 = {0, 1, 0, 1, 0, 0, 0, 0, 0};  // path graph; arbitrary fixed base
    x.g1 = apply_permutation(x.g0, 3, phi);
    Bytes xb = x.serialize();
    for (const Permutation& pi : perms) {
      Bytes e = gi_encode_with_permutation(x, phi, pi);
      for (uint8_t s : {0, 1}) {
        Bytes sb{s};
        auto positions = enc->select(xb, sb);
        std::vector<bool> revealed;
        for (uint32_t p : positions) revealed.push_back(get_bit(e, p));
        CHECK(enc->judge(xb, sb, revealed));
      }
      // the decoder recovers the planted witness from the full encoding
      Bytes w = enc->decode(xb, e);
      CHECK(graph_iso_relation().holds(xb, w));
    }
  }
}

TEST_CASE("base encoding: extractability holds for every admissible encoding at v=3") {
  // enumerate ALL bit strings of the encoding length and check the axiom:
  // passing both challenges implies the decoder outputs a witness
  GraphIsoInstance x;
  x.v = 3;
  x.g0 = {0, 1, 0, 1, 0, 0, 0, 0, 0};
  Permutation phi{2, 0, 1};
  x.g1 = apply_permutation(x.g0, 3, phi);
  Bytes xb = x.serialize();
  auto enc = gi_encoding(3);
  size_t n = enc->code_bits(xb);
  REQUIRE(n == 9 + 6 + 6);  // adjacency plus two 2-bit-per-entry tables
  auto sel0 = enc->select(xb, Bytes{0});
  auto sel1 = enc->select(xb, Bytes{1});
  uint64_t admissible = 0;
  for (uint64_t bits = 0; bits < (1ull << n); ++bits) {
    Bytes e(bytes_for_bits(n), 0);
    for (size_t i = 0; i < n; ++i) set_bit(e, i, (bits >> i) & 1);
    std::vector<bool> r0, r1;
    for (uint32_t p : sel0) r0.push_back(get_bit(e, p));
    for (uint32_t p : sel1) r1.push_back(get_bit(e, p));
    if (enc->judge(xb, Bytes{0}, r0) && enc->judge(xb, Bytes{1}, r1)) {
      ++admissible;
      CHECK(graph_iso_relation().holds(xb, enc->decode(xb, e)));
    }
  }
  // one admissible encoding per (image, pi, rho) triple: with |Aut(G0)| = 2
  // for the single-edge graph there are (6/2) images x 2 x 2 = 12
  CHECK(admissible == 12);
}

TEST_CASE("base encoding: revealed bits are distributed exactly like simulated ones at v=3") {
  // full enumeration over the encoder's randomness (6 permutations) versus
  // the simulator's randomness (6 permutations), for both challenges
  auto perms = all_permutations(3);
  GraphIsoInstance x;
  x.v = 3;
  x.g0 = {0, 1, 1, 1, 0, 0, 1, 0, 0};
  Permutation phi{1, 2, 0};
  x.g1 = apply_permutation(x.g0, 3, phi);
  Bytes xb = x.serialize();
  auto enc = gi_encoding(3);
  for (uint8_t s : {0, 1}) {
    auto positions = enc->select(xb, Bytes{s});
    std::map<std::vector<bool>, int> real, simulated;
    for (const Permutation& pi : perms) {
      Bytes e = gi_encode_with_permutation(x, phi, pi);
      std::vector<bool> revealed;
      for (uint32_t p : positions) revealed.push_back(get_bit(e, p));
      real[revealed]++;
      simulated[gi_simulate_with_permutation(x, s != 0, pi)]++;
    }
    CHECK(real == simulated);  // identical distributions, not merely close
  }
}

TEST_CASE("base encoding: simulatability holds statistically at v=6") {
  auto enc = gi_encoding(6);
  Rng rng(5);
  auto [x, phi] = random_gi_instance(6, 0.5, rng);
  Bytes xb = x.serialize();
  const int kSamples = 10000;
  for (uint8_t s : {0, 1}) {
    auto positions = enc->select(xb, Bytes{s});
    // project onto the revealed permutation's image of vertex 0 (6 bins)
    // and onto one adjacency bit
    std::vector<uint64_t> real_img(6, 0), sim_img(6, 0);
    std::vector<uint64_t> real_bit(2, 0), sim_bit(2, 0);
    Rng re(6), se(7);
    for (int t = 0; t < kSamples; ++t) {
      Bytes e = enc->encode(xb, serialize_permutation(phi), re);
      std::vector<bool> revealed;
      for (uint32_t p : positions) revealed.push_back(get_bit(e, p));
      // table starts after the 36 adjacency bits; 3 bits per entry at v=6
      uint32_t img = 0;
      for (int k = 0; k < 3; ++k) img |= static_cast<uint32_t>(revealed[36 + k]) << k;
      real_img[img]++;
      real_bit[revealed[1] ? 1 : 0]++;
      std::vector<bool> sim = enc->simulate(xb, Bytes{s}, se);
      img = 0;
      for (int k = 0; k < 3; ++k) img |= static_cast<uint32_t>(sim[36 + k]) << k;
      sim_img[img]++;
      sim_bit[sim[1] ? 1 : 0]++;
    }
    CHECK(tv_distance(real_img, sim_img) < 0.02);
    CHECK(tv_distance(real_bit, sim_bit) < 0.02);
  }
}

TEST_CASE("parallel repetition: completeness, admissibility decoding, simulatability") {
  Rng rng(8);
  auto [x, phi] = random_gi_instance(4, 0.5, rng);
  Bytes xb = x.serialize();
  Bytes wb = serialize_permutation(phi);
  Relation rel = graph_iso_relation();
  auto enc = parallel_repeat(gi_encoding(4), 6, rel);
  CHECK(enc->challenge_bits() == 6);
  CHECK(enc->code_bits(xb) == 6 * gi_encoding(4)->code_bits(xb));

  for (int t = 0; t < 50; ++t) {
    Bytes e = enc->encode(xb, wb, rng);
    Bytes s = rng.bits(6);
    auto positions = enc->select(xb, s);
    std::vector<bool> revealed;
    for (uint32_t p : positions) revealed.push_back(get_bit(e, p));
    CHECK(enc->judge(xb, s, revealed));
    CHECK(rel.holds(xb, enc->decode(xb, e)));
  }
  // simulated bits judge successfully too (their distribution equals honest)
  for (int t = 0; t < 50; ++t) {
    Bytes s = rng.bits(6);
    CHECK(enc->judge(xb, s, enc->simulate(xb, s, rng)));
  }
  // a non-decodable garbage string produces the sentinel non-witness
  Bytes garbage(bytes_for_bits(enc->code_bits(xb)), 0xAA);
  CHECK_FALSE(rel.holds(xb, enc->decode(xb, garbage)));
}

TEST_CASE("honest proof sessions always succeed, hybrid and composed") {
  Rng rng(9);
  for (uint64_t t = 0; t < 50; ++t) {
    auto [x, phi] = random_gi_instance(4, 0.5, rng);
    auto enc = parallel_repeat(gi_encoding(4), 8, graph_iso_relation());
    bool composed = t % 5 == 0;  // composed runs are heavier; sample them
    ZkpkParams p = make_zkpk_params(enc, graph_iso_relation(), 128, composed);
    ZkpkRun run = zkpk_run(cfg_for(mix_seed(10, t)), p, x.serialize(), serialize_permutation(phi));
    CHECK_FALSE(run.aborted);
    CHECK(run.verifier_judgment == kJudgeSuccess);
    CHECK(run.prover_judgment == kJudgeSuccess);
  }
}

TEST_CASE("the honest prover refuses to run on a non-witness") {
  Rng rng(10);
  auto [x, phi] = random_gi_instance(4, 0.5, rng);
  Permutation wrong = phi;
  std::swap(wrong[0], wrong[1]);
  if (apply_permutation(x.g0, 4, wrong) == x.g1) return;  // rare symmetric graph; skip
  auto enc = parallel_repeat(gi_encoding(4), 4, graph_iso_relation());
  ZkpkParams p = make_zkpk_params(enc, graph_iso_relation(), 128, false);
  ZkpkRun run = zkpk_run(cfg_for(11), p, x.serialize(), serialize_permutation(wrong));
  CHECK(run.verifier_judgment == kJudgeAbort);
}

TEST_CASE("guessing prover wins with probability close to 2^-sigma") {
  const uint32_t sigma = 4;
  const uint64_t n = 20000;
  Rng rng(12);
  auto [x, phi] = random_gi_instance(4, 0.5, rng);
  Bytes xb = x.serialize();
  auto rows = run_batch<uint8_t>(n, 13, ExecMode::Parallel, [&](uint64_t, uint64_t seed) {
    auto enc = parallel_repeat(gi_encoding(4), sigma, graph_iso_relation());
    ZkpkParams p = make_zkpk_params(enc, graph_iso_relation(), 128, false);
    Session sess(cfg_for(seed));
    ZkpkGuessingProver prover(Side::A, p, xb, sess.party_rng(Side::A));
    ZkpkVerifier verifier(Side::B, p, sess.party_rng(Side::B));
    Transcript t = sess.run(prover, verifier);
    return static_cast<uint8_t>(
        t.out_b && !t.out_b->empty() && (*t.out_b)[0] == kJudgeSuccess ? 1 : 0);
  });
  uint64_t wins = 0;
  for (uint8_t r : rows) wins += r;
  CHECK(within_binomial_sd(wins, n, std::pow(2.0, -double(sigma)), 3.5));
}

TEST_CASE("knowledge simulator: verdicts agree with the ideal functionality") {
  Rng rng(14);
  auto [x, phi] = random_gi_instance(4, 0.5, rng);
  auto enc = parallel_repeat(gi_encoding(4), 6, graph_iso_relation());
  ZkpkParams p = make_zkpk_params(enc, graph_iso_relation(), 128, false);

  // honest prover: accept and ideal success agree on every run
  for (uint64_t t = 0; t < 200; ++t) {
    PartyFactory prover = [&](Side side, Rng r) -> std::unique_ptr<Party> {
      return std::make_unique<ZkpkProver>(side, p, x.serialize(), serialize_permutation(phi), r);
    };
    ExtractSimResult res = zkpk_extract_simulator(prover, graph_iso_relation(), cfg_for(mix_seed(15, t)), p);
    CHECK(res.transcript_accept);
    CHECK(res.ideal_success);
    CHECK(graph_iso_relation().holds(x.serialize(), res.extracted_witness));
  }

  // witness-less prover: accept-but-ideal-abort happens at most at 2^-sigma.
  // (the extractor may well find a witness in the random padding; what must be
  // rare is accepting while the ideal functionality aborts)
  const uint64_t n = 20000;
  auto rows = run_batch<uint8_t>(n, 16, ExecMode::Parallel, [&](uint64_t, uint64_t seed) {
    PartyFactory prover = [&](Side side, Rng r) -> std::unique_ptr<Party> {
      return std::make_unique<ZkpkGuessingProver>(side, p, x.serialize(), r);
    };
    ExtractSimResult res = zkpk_extract_simulator(prover, graph_iso_relation(), cfg_for(seed), p);
    return static_cast<uint8_t>(res.transcript_accept && !res.ideal_success ? 1 : 0);
  });
  uint64_t bad = 0;
  for (uint8_t r : rows) bad += r;
  double p_bad = std::pow(2.0, -6.0);
  CHECK(static_cast<double>(bad) / n <= p_bad + 3.5 * std::sqrt(p_bad * (1 - p_bad) / n));

  // a prover that quits immediately counts as submitting a non-witness
  PartyFactory quitter = [&](Side side, Rng r) -> std::unique_ptr<Party> {
    class Quitter : public Party {
     public:
      using Party::Party;
      std::vector<Frame> step(const Frame*, SessionCtx&) override {
        abort_party();
        return {Frame{"REFUSE", {}}};
      }
      std::unique_ptr<Party> clone() const override { return std::make_unique<Quitter>(*this); }
    };
    (void)r;
    return std::make_unique<Quitter>(side);
  };
  ExtractSimResult res = zkpk_extract_simulator(quitter, graph_iso_relation(), cfg_for(17), p);
  CHECK_FALSE(res.ideal_success);
  CHECK_FALSE(res.transcript_accept);
}

TEST_CASE("zero-knowledge simulator: honest verifier accepts every simulated proof") {
  Rng rng(18);
  auto [x, phi] = random_gi_instance(4, 0.5, rng);
  auto enc = parallel_repeat(gi_encoding(4), 6, graph_iso_relation());
  ZkpkParams p = make_zkpk_params(enc, graph_iso_relation(), 128, false);
  for (uint64_t t = 0; t < 300; ++t) {
    PartyFactory verifier = [&](Side side, Rng r) -> std::unique_ptr<Party> {
      return std::make_unique<ZkpkVerifier>(side, p, r);
    };
    ZkSimResult res = zkpk_zk_simulator(verifier, x.serialize(), cfg_for(mix_seed(19, t)), p);
    CHECK(res.verifier_judgment == kJudgeSuccess);
  }
}

TEST_CASE("zero-knowledge simulator: revealed data distributed like real proofs") {
  // exact at v=3 by construction; measured here as a two-sample projection
  auto enc = gi_encoding(3);
  GraphIsoInstance x;
  x.v = 3;
  x.g0 = {0, 1, 0, 1, 0, 1, 0, 1, 0};
  Permutation phi{2, 1, 0};
  x.g1 = apply_permutation(x.g0, 3, phi);
  Bytes xb = x.serialize();
  ZkpkParams p = make_zkpk_params(enc, graph_iso_relation(), 128, false);

  const uint64_t kRuns = 20000;
  std::vector<uint64_t> real_img(3, 0), sim_img(3, 0);
  for (uint64_t t = 0; t < kRuns; ++t) {
    // real proof: revealed table entry for vertex 0
    Session sess(cfg_for(mix_seed(20, t)));
    ZkpkProver prover(Side::A, p, xb, serialize_permutation(phi), sess.party_rng(Side::A));
    ZkpkVerifier verifier(Side::B, p, sess.party_rng(Side::B));
    sess.run(prover, verifier);
    // extract the revealed bits from the opening frame in the transcript
    // (positions 9..10 hold the first table entry at v=3)
    PartyFactory vf = [&](Side side, Rng r) -> std::unique_ptr<Party> {
      return std::make_unique<ZkpkVerifier>(side, p, r);
    };
    ZkSimResult sim = zkpk_zk_simulator(vf, xb, cfg_for(mix_seed(21, t)), p);
    uint32_t img = 0;
    for (int k = 0; k < 2; ++k) img |= static_cast<uint32_t>(sim.revealed_bits[9 + k]) << k;
    REQUIRE(img < 3);
    sim_img[img]++;
    // real counterpart via a fresh encoding
    Rng re(mix_seed(22, t));
    Bytes e = enc->encode(xb, serialize_permutation(phi), re);
    uint32_t rimg = 0;
    for (int k = 0; k < 2; ++k) rimg |= static_cast<uint32_t>(get_bit(e, 9 + k)) << k;
    REQUIRE(rimg < 3);
    real_img[rimg]++;
  }
  CHECK(tv_distance(real_img, sim_img) < 0.02);
}

TEST_CASE("hybrid and composed proofs agree on the judgment for 10^3 paired instances") {
  auto rows = run_batch<uint8_t>(1000, 42, ExecMode::Parallel, [&](uint64_t t, uint64_t seed) {
    Rng rng(seed);
    auto [x, phi] = random_gi_instance(4, 0.5, rng);
    auto enc = parallel_repeat(gi_encoding(4), 4, graph_iso_relation());
    ZkpkParams hybrid = make_zkpk_params(enc, graph_iso_relation(), 128, false);
    ZkpkParams composed = make_zkpk_params(enc, graph_iso_relation(), 128, true);
    bool give_witness = t % 3 != 0;
    Bytes w = give_witness ? serialize_permutation(phi) : Bytes{0xff};
    ZkpkRun h = zkpk_run(cfg_for(mix_seed(seed, 1)), hybrid, x.serialize(), w);
    ZkpkRun c = zkpk_run(cfg_for(mix_seed(seed, 2)), composed, x.serialize(), w);
    bool agree = h.verifier_judgment == c.verifier_judgment;
    bool expected = !give_witness || h.verifier_judgment == kJudgeSuccess;
    return static_cast<uint8_t>(agree && expected ? 1 : 0);
  });
  uint64_t ok = 0;
  for (uint8_t r : rows) ok += r;
  CHECK(ok == 1000);
}

TEST_CASE("hybrid and composed proofs agree on the judgment for the same instances") {
  Rng rng(23);
  for (uint64_t t = 0; t < 30; ++t) {
    auto [x, phi] = random_gi_instance(4, 0.5, rng);
    auto enc = parallel_repeat(gi_encoding(4), 4, graph_iso_relation());
    ZkpkParams hybrid = make_zkpk_params(enc, graph_iso_relation(), 128, false);
    ZkpkParams composed = make_zkpk_params(enc, graph_iso_relation(), 128, true);
    bool give_witness = t % 3 != 0;
    Bytes w = give_witness ? serialize_permutation(phi) : Bytes{0xff};
    ZkpkRun h = zkpk_run(cfg_for(mix_seed(24, t)), hybrid, x.serialize(), w);
    ZkpkRun c = zkpk_run(cfg_for(mix_seed(25, t)), composed, x.serialize(), w);
    CHECK(h.verifier_judgment == c.verifier_judgment);
    if (give_witness) CHECK(h.verifier_judgment == kJudgeSuccess);
  }
}
