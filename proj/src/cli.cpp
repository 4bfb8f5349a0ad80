#include "scf/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "scf/batch.hpp"
#include "scf/registry.hpp"
#include "scf/stats.hpp"

namespace scf {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitAbort = 3;
constexpr int kExitReplayMismatch = 4;

std::string outcome_str(const Outcome& o) {
  if (!o) return "!";
  if (o->empty()) return "-";
  return to_hex(*o);
}

void write_transcripts(const std::string& path, const std::vector<Transcript>& ts) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file: " + path);
  for (const auto& t : ts) f << t.to_text();
}

int cmd_run(RunConfig cfg) {
  cfg.validate();
  auto transcripts = run_batch<Transcript>(
      cfg.n, cfg.seed, ExecMode::Parallel,
      [&](uint64_t, uint64_t seed) { return run_protocol_session(cfg, seed); });

  uint64_t aborts = 0;
  std::map<std::string, uint64_t> histogram;
  for (const auto& t : transcripts) {
    Outcome o = session_outcome(t);
    if (!o)
      ++aborts;
    else
      ++histogram[outcome_str(o)];
  }
  std::cout << "protocol " << cfg.protocol << " mode " << run_mode_name(cfg.mode) << " backend "
            << backend_name(cfg.backend) << " n " << cfg.n << " seed " << cfg.seed << "\n";
  std::cout << "aborts " << aborts << " / " << cfg.n << "\n";
  std::vector<std::pair<uint64_t, std::string>> top;
  for (const auto& [k, v] : histogram) top.emplace_back(v, k);
  std::sort(top.rbegin(), top.rend());
  size_t shown = std::min<size_t>(top.size(), 8);
  std::cout << "distinct outcomes " << histogram.size() << "; top " << shown << ":\n";
  for (size_t i = 0; i < shown; ++i)
    std::cout << "  " << top[i].second << "  " << top[i].first << "\n";
  if (!cfg.out_path.empty()) {
    write_transcripts(cfg.out_path, transcripts);
    std::cout << "wrote " << transcripts.size() << " transcripts to " << cfg.out_path << "\n";
  }
  if (cfg.strict && aborts > 0) return kExitAbort;
  return kExitOk;
}

int cmd_replay(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open transcript file: " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  std::vector<Transcript> sessions = parse_transcript_file(buf.str());
  size_t mismatches = 0;
  for (size_t i = 0; i < sessions.size(); ++i) {
    ReplayReport rep = replay_transcript(sessions[i]);
    if (rep.match) {
      std::cout << "session " << i << ": MATCH\n";
    } else {
      ++mismatches;
      std::cout << "session " << i << ": MISMATCH (" << rep.detail << ")\n";
    }
  }
  std::cout << mismatches << " mismatching of " << sessions.size() << " sessions\n";
  return mismatches == 0 ? kExitOk : kExitReplayMismatch;
}

Bytes random_target(uint64_t seed, size_t nbits) {
  Rng rng(mix_seed(seed, 23));
  return rng.bits(nbits);
}

int cmd_attack(RunConfig cfg, const std::string& strategy, const std::string& target_hex) {
  cfg.validate();
  uint64_t n = cfg.n;

  if (strategy == "enforce-alice" || strategy == "enforce-bob") {
    if (strategy == "enforce-bob" && cfg.protocol != "coin-ff")
      throw ConfigError("enforce-bob applies to coin-ff");
    SssParams sss(cfg.sigma, FieldSpec::gf2ext(cfg.field_width));
    size_t nbits = cfg.protocol == "coin-ff" ? cfg.sigma * cfg.field_width : cfg.ell;
    std::optional<Bytes> fixed_target;
    if (!target_hex.empty()) fixed_target = from_hex(target_hex);
    struct Row {
      uint8_t completed, hit;
    };
    auto rows = run_batch<Row>(n, cfg.seed, ExecMode::Parallel, [&](uint64_t, uint64_t seed) {
      Bytes target = fixed_target ? *fixed_target : random_target(seed, nbits);
      SessionConfig sc = cfg.session_config(seed);
      EnforceStats st;
      if (strategy == "enforce-bob") {
        PartyFactory bob = [&](Side side, Rng rng) -> std::unique_ptr<Party> {
          return std::make_unique<StrongFlipBob>(
              side, make_strong_flip_params(sss, scheme_key_bits(cfg.backend, cfg.kappa), false), rng);
        };
        st = enforce_strong_flip_bob(bob, target, sc, sss);
      } else if (cfg.protocol == "coin-ff") {
        PartyFactory alice = [&](Side side, Rng rng) -> std::unique_ptr<Party> {
          return std::make_unique<StrongFlipAlice>(
              side, make_strong_flip_params(sss, scheme_key_bits(cfg.backend, cfg.kappa), false), rng);
        };
        st = enforce_strong_flip_alice(alice, target, sc, sss);
      } else {
        PartyFactory alice = [&](Side side, Rng rng) -> std::unique_ptr<Party> {
          return std::make_unique<XorFlipAlice>(
              side, make_xor_flip_params(cfg.ell, scheme_key_bits(cfg.backend, cfg.kappa), false),
              rng);
        };
        st = enforce_xor_flip_alice(alice, target, sc, cfg.ell);
      }
      return Row{static_cast<uint8_t>(st.completed ? 1 : 0), static_cast<uint8_t>(st.hit_target ? 1 : 0)};
    });
    uint64_t completed = 0, hit = 0;
    for (auto& r : rows) {
      completed += r.completed;
      hit += r.hit;
    }
    std::cout << strategy << " on " << cfg.protocol << ": runs " << n << " completed " << completed
              << " target-hits " << hit << " mismatches " << (completed - hit) << "\n";
    return kExitOk;
  }

  if (strategy == "cheat-open") {
    SssParams sss(cfg.sigma, FieldSpec::gf2ext(cfg.field_width));
    auto rows = run_batch<uint8_t>(n, cfg.seed, ExecMode::Parallel, [&](uint64_t, uint64_t seed) {
      Session sess(cfg.session_config(seed));
      Rng setup(mix_seed(seed, 5));
      MixedKey pk = sess.scheme().gen_binding(setup).pk;
      Message m = random_message(sss, setup);
      SenderOptions opts;
      opts.behavior = SenderBehavior::CorruptCells;
      opts.corrupt_cells = sss.sigma;
      CommitSender sender(Side::A, sss, m, pk, hybrid_planner(), sess.party_rng(Side::A), opts);
      CommitReceiver receiver(Side::B, sss, pk, hybrid_planner(), sess.party_rng(Side::B));
      Transcript t = sess.run(sender, receiver);
      return static_cast<uint8_t>(t.out_b.has_value() ? 1 : 0);
    });
    uint64_t accepted = 0;
    for (uint8_t r : rows) accepted += r;
    double exact = hypergeom_avoid_probability(sss.Sigma, sss.sigma, sss.sigma);
    std::cout << "cheat-open sigma " << sss.sigma << ": accepted " << accepted << " / " << n << " = "
              << static_cast<double>(accepted) / n << " (exact avoidance probability " << exact
              << ")\n";
    return kExitOk;
  }

  if (strategy == "rewind-blum") {
    bool target_bit = target_hex.empty() ? true : (from_hex(target_hex).at(0) & 1) != 0;
    uint64_t hits = 0, total_attempts = 0;
    try {
      for (uint64_t i = 0; i < n; ++i) {
        SessionConfig sc = cfg.session_config(mix_seed(cfg.seed, i));
        PartyFactory committer = [](Side side, Rng rng) -> std::unique_ptr<Party> {
          return std::make_unique<BlumAlice>(side, BlumParams{1}, rng);
        };
        RewindResult r =
            rewind_enforce_blum(committer, target_bit, sc, RewindStrategy::ResampleUntilHit);
        total_attempts += r.attempts;
        if (r.outcome && !r.outcome->empty() && ((*r.outcome)[0] != 0) == target_bit) ++hits;
      }
    } catch (const RewindingForbidden& e) {
      std::cout << "rewind-blum: FAILED: " << e.what()
                << " (the enforcement strategy needs state snapshots, which this mode models as "
                   "physically unavailable)\n";
      return kExitOk;
    }
    std::cout << "rewind-blum: " << hits << "/" << n << " targets hit, mean attempts "
              << static_cast<double>(total_attempts) / n << "\n";
    return kExitOk;
  }

  if (strategy == "veto-alice") {
    std::vector<uint64_t> hist = run_batch_histogram(
        n, cfg.seed, ExecMode::Parallel, (1u << cfg.ell) + 1, [&](uint64_t, uint64_t seed) -> size_t {
          Session sess(cfg.session_config(seed));
          XorFlipParams p = make_xor_flip_params(cfg.ell, sess.scheme().key_bits(), cfg.composed());
          XorFlipAliceVeto alice(Side::A, p, sess.party_rng(Side::A),
                                 [](const Bytes& c) { return !get_bit(c, 0); });
          XorFlipBob bob(Side::B, p, sess.party_rng(Side::B));
          Transcript t = sess.run(alice, bob);
          if (!t.out_b) return 1u << cfg.ell;  // abort bin
          uint64_t v = 0;
          for (size_t i = 0; i < cfg.ell; ++i) v |= static_cast<uint64_t>(get_bit(*t.out_b, i)) << i;
          return static_cast<size_t>(v);
        });
    uint64_t aborts = hist.back();
    uint64_t max_count = 0;
    for (size_t i = 0; i + 1 < hist.size(); ++i) max_count = std::max(max_count, hist[i]);
    double bound = static_cast<double>(n) / (1u << cfg.ell);
    std::cout << "veto-alice: aborts " << aborts << "/" << n << ", max per-string count "
              << max_count << " (uniform expectation " << bound
              << "); vetoes remove mass, never add\n";
    return kExitOk;
  }

  if (strategy == "steer-broken") {
    Bytes target(bytes_for_bits(cfg.ell), 0);
    if (!target_hex.empty()) target = from_hex(target_hex);
    uint64_t hits = 0;
    for (uint64_t i = 0; i < n; ++i) {
      Session sess(cfg.session_config(mix_seed(cfg.seed, i)));
      PlainFlipAlice alice(Side::A, cfg.ell, sess.party_rng(Side::A));
      PlainFlipBobSteerer bob(Side::B, cfg.ell, target);
      Transcript t = sess.run(alice, bob);
      if (t.out_a && *t.out_a == target) ++hits;
    }
    std::cout << "steer-broken (no commitment): adversary hit its target " << hits << "/" << n
              << " times\n";
    return kExitOk;
  }

  throw ConfigError("unknown strategy: " + strategy);
}

int cmd_zkpk(const std::string& verb, uint32_t v, uint32_t sigma, uint64_t seed,
             const std::string& instance_path, const std::string& out_path, RunMode mode) {
  Rng setup(mix_seed(seed, 5));
  GraphIsoInstance x;
  std::optional<Permutation> phi;
  if (!instance_path.empty()) {
    std::ifstream f(instance_path);
    if (!f) throw ConfigError("cannot open instance file: " + instance_path);
    std::stringstream buf;
    buf << f.rdbuf();
    auto parsed = gi_instance_from_text(buf.str());
    x = parsed.first;
    phi = parsed.second;
    v = x.v;
  } else {
    auto gen = random_gi_instance(v, 0.5, setup);
    x = gen.first;
    phi = gen.second;
  }
  auto enc = parallel_repeat(gi_encoding(v), sigma, graph_iso_relation());
  ZkpkParams p = make_zkpk_params(enc, graph_iso_relation(), 128, mode == RunMode::Composed);
  SessionConfig sc;
  sc.seed = seed;
  sc.quantum_realistic = mode == RunMode::QuantumRealistic;

  if (verb == "prove") {
    if (!phi) throw ConfigError("prove needs a witness (phi line in the instance file)");
    Transcript transcript;
    uint8_t judgment = kJudgeAbort;
    if (instance_path.empty()) {
      // seed-derived instance: route through the catalog so the transcript
      // carries a replayable header
      RunConfig cfg;
      cfg.protocol = "zkpk";
      cfg.vertices = v;
      cfg.sigma = sigma;
      cfg.seed = seed;
      cfg.mode = mode;
      cfg.validate();
      transcript = run_protocol_session(cfg, seed);
      if (transcript.out_b && !transcript.out_b->empty()) judgment = (*transcript.out_b)[0];
    } else {
      ZkpkRun run = zkpk_run(sc, p, x.serialize(), serialize_permutation(*phi));
      transcript = std::move(run.transcript);
      transcript.header.emplace_back("proto", "zkpk-file");  // not seed-replayable
      judgment = run.verifier_judgment;
    }
    std::cout << "judgment: " << (judgment == kJudgeSuccess ? "success" : "abort") << "\n";
    if (!out_path.empty()) {
      write_transcripts(out_path, {transcript});
      std::ofstream inst(out_path + ".instance");
      inst << gi_instance_to_text(x, phi ? &*phi : nullptr);
      std::cout << "wrote transcript to " << out_path << " and instance to " << out_path
                << ".instance\n";
    }
    return judgment == kJudgeSuccess ? kExitOk : kExitAbort;
  }
  if (verb == "verify") {
    // a verification run with a prover that only guesses; accepts with
    // probability 2^-sigma, demonstrating the knowledge error
    Session sess(sc);
    ZkpkGuessingProver prover(Side::A, p, x.serialize(), sess.party_rng(Side::A));
    ZkpkVerifier verifier(Side::B, p, sess.party_rng(Side::B));
    Transcript t = sess.run(prover, verifier);
    bool ok = t.out_b && !t.out_b->empty() && (*t.out_b)[0] == kJudgeSuccess;
    std::cout << "witness-less prover " << (ok ? "accepted (lucky guess)" : "rejected") << "\n";
    return kExitOk;
  }
  if (verb == "simulate") {
    PartyFactory verifier = [&p](Side side, Rng rng) -> std::unique_ptr<Party> {
      return std::make_unique<ZkpkVerifier>(side, p, rng);
    };
    ZkSimResult res = zkpk_zk_simulator(verifier, x.serialize(), sc, p);
    std::cout << "simulated proof (no witness used): verifier judgment "
              << (res.verifier_judgment == kJudgeSuccess ? "success" : "abort") << ", challenge "
              << to_hex(res.forced_challenge) << "\n";
    return res.verifier_judgment == kJudgeSuccess ? kExitOk : kExitAbort;
  }
  throw ConfigError("unknown zkpk verb: " + verb);
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"two-party coin-flipping, commitments and secure evaluation testbed"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string mode_str = "hybrid", backend_str = "ideal";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "number of sessions");
    sub->add_option("--seed", cfg.seed, "master seed");
    sub->add_option("--sigma", cfg.sigma, "share / repetition parameter");
    sub->add_option("--kappa", cfg.kappa, "key bits (ideal backend)");
    sub->add_option("--ell", cfg.ell, "outcome bits");
    sub->add_option("--field-width", cfg.field_width, "share field width (8 or 16)");
    sub->add_option("--v", cfg.vertices, "graph vertices");
    sub->add_option("--backend", backend_str, "ideal | lwe");
    sub->add_option("--mode", mode_str, "hybrid | composed | quantum-realistic");
    sub->add_option("--out", cfg.out_path, "transcript output file");
    sub->add_flag("--strict", cfg.strict, "nonzero exit on protocol abort");
  };

  auto* run = app.add_subcommand("run", "run honest protocol sessions and summarize outcomes");
  run->add_option("--protocol", cfg.protocol, "blum | coin-fr | coin-ff | commit | zkpk | ot | sfe-xor | sfe-and");
  add_common(run);

  std::string strategy, target_hex;
  auto* attack = app.add_subcommand("attack", "run an adversary / simulator scenario");
  attack->add_option("--protocol", cfg.protocol, "target protocol");
  attack->add_option("--strategy", strategy,
                     "enforce-alice | enforce-bob | cheat-open | rewind-blum | veto-alice | steer-broken")
      ->required();
  attack->add_option("--target", target_hex, "enforcement target (hex)");
  add_common(attack);

  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "re-execute recorded transcripts and compare");
  replay->add_option("file", replay_path, "transcript file")->required();

  std::string zkpk_verb, instance_path, zkpk_out;
  uint64_t zkpk_seed = 1;
  uint32_t zkpk_v = 4, zkpk_sigma = 10;
  std::string zkpk_mode = "hybrid";
  auto* zkpk = app.add_subcommand("zkpk", "prove, verify or simulate a proof of knowledge");
  zkpk->add_option("verb", zkpk_verb, "prove | verify | simulate")->required();
  zkpk->add_option("--v", zkpk_v, "graph vertices");
  zkpk->add_option("--sigma", zkpk_sigma, "challenge bits");
  zkpk->add_option("--seed", zkpk_seed, "seed");
  zkpk->add_option("--instance", instance_path, "instance file");
  zkpk->add_option("--out", zkpk_out, "transcript output file");
  zkpk->add_option("--mode", zkpk_mode, "hybrid | composed | quantum-realistic");

  std::string ot_m0 = "aa", ot_m1 = "bb";
  uint64_t ot_seed = 1;
  bool ot_choice = false;
  auto* ot = app.add_subcommand("ot", "oblivious transfer");
  ot->add_option("verb", zkpk_verb, "run")->required();
  ot->add_option("--m0", ot_m0, "first message (hex)");
  ot->add_option("--m1", ot_m1, "second message (hex)");
  ot->add_flag("--c", ot_choice, "choice bit");
  ot->add_option("--seed", ot_seed, "seed");

  std::string sfe_f = "xor", sfe_x1 = "01", sfe_x2 = "01", sfe_mode = "hybrid";
  uint64_t sfe_seed = 1;
  auto* sfe = app.add_subcommand("sfe", "two-party function evaluation");
  sfe->add_option("verb", zkpk_verb, "run")->required();
  sfe->add_option("--f", sfe_f, "xor | and");
  sfe->add_option("--x1", sfe_x1, "first input (hex)");
  sfe->add_option("--x2", sfe_x2, "second input (hex)");
  sfe->add_option("--mode", sfe_mode, "hybrid | composed");
  sfe->add_option("--seed", sfe_seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    cfg.mode = parse_run_mode(mode_str);
    cfg.backend = parse_backend(backend_str);
    if (run->parsed()) return cmd_run(cfg);
    if (attack->parsed()) return cmd_attack(cfg, strategy, target_hex);
    if (replay->parsed()) return cmd_replay(replay_path);
    if (zkpk->parsed())
      return cmd_zkpk(zkpk_verb, zkpk_v, zkpk_sigma, zkpk_seed, instance_path, zkpk_out,
                      parse_run_mode(zkpk_mode));
    if (ot->parsed()) {
      if (zkpk_verb != "run") throw ConfigError("ot supports: run");
      SessionConfig sc;
      sc.seed = ot_seed;
      OtRun r = ot_run(sc, from_hex(ot_m0), from_hex(ot_m1), ot_choice);
      std::cout << "receiver got: " << outcome_str(r.received) << "\n";
      return r.received ? kExitOk : kExitAbort;
    }
    if (sfe->parsed()) {
      if (zkpk_verb != "run") throw ConfigError("sfe supports: run");
      if (sfe_f != "xor" && sfe_f != "and") throw ConfigError("sfe --f must be xor or and");
      Bytes x1 = from_hex(sfe_x1), x2 = from_hex(sfe_x2);
      std::shared_ptr<const PassiveProtocol> f =
          sfe_f == "and" ? passive_and_via_ot() : passive_xor(x1.size());
      SfeParams p = make_sfe_params(f, 128, parse_run_mode(sfe_mode) == RunMode::Composed);
      SessionConfig sc;
      sc.seed = sfe_seed;
      SfeRun r = run_sfe_session(sc, p, x1, x2);
      std::cout << "outputs: A " << outcome_str(r.out_a) << "  B " << outcome_str(r.out_b) << "\n";
      return (r.out_a && r.out_b) ? kExitOk : kExitAbort;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace scf
