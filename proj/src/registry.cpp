#include "scf/registry.hpp"

#include <sstream>

namespace scf {

const char* run_mode_name(RunMode m) {
  switch (m) {
    case RunMode::Hybrid: return "hybrid";
    case RunMode::Composed: return "composed";
    case RunMode::QuantumRealistic: return "quantum-realistic";
  }
  return "?";
}

RunMode parse_run_mode(const std::string& s) {
  if (s == "hybrid") return RunMode::Hybrid;
  if (s == "composed") return RunMode::Composed;
  if (s == "quantum-realistic") return RunMode::QuantumRealistic;
  throw ConfigError("unknown mode: " + s);
}

void RunConfig::validate() const {
  if (!find_protocol(protocol)) throw ConfigError("unknown protocol: " + protocol);
  if (n == 0) throw ConfigError("n must be positive");
  if (sigma == 0) throw ConfigError("sigma must be positive");
  if (kappa == 0 || kappa % 8 != 0) throw ConfigError("kappa must be a positive byte multiple");
  if (ell == 0) throw ConfigError("ell must be positive");
  if (protocol == "coin-ff" || protocol == "commit") {
    if (field_width % 8 != 0 || field_width == 0 || field_width > 16)
      throw ConfigError("field width must be 8 or 16");
    // all share points must exist in the field
    if ((1u << field_width) < 5 * sigma + 1)
      throw ConfigError("field too small for 4*sigma shares plus sigma message points");
  }
  if (protocol == "zkpk" && vertices < 2) throw ConfigError("zkpk needs at least 2 vertices");
  if (protocol == "blum" && mode == RunMode::Composed)
    throw ConfigError("the base protocol has no composed mode");
}

SessionConfig RunConfig::session_config(uint64_t session_seed) const {
  SessionConfig sc;
  sc.seed = session_seed;
  sc.backend = backend;
  sc.ideal_kappa = kappa;
  sc.quantum_realistic = mode == RunMode::QuantumRealistic;
  return sc;
}

namespace {

std::vector<std::pair<std::string, std::string>> standard_header(const RunConfig& cfg,
                                                                 uint64_t session_seed) {
  std::vector<std::pair<std::string, std::string>> h;
  h.emplace_back("proto", cfg.protocol);
  h.emplace_back("mode", run_mode_name(cfg.mode));
  h.emplace_back("backend", backend_name(cfg.backend));
  h.emplace_back("seed", std::to_string(session_seed));
  h.emplace_back("sigma", std::to_string(cfg.sigma));
  h.emplace_back("kappa", std::to_string(cfg.kappa));
  h.emplace_back("ell", std::to_string(cfg.ell));
  h.emplace_back("field", FieldSpec::gf2ext(cfg.field_width).to_string());
  h.emplace_back("v", std::to_string(cfg.vertices));
  return h;
}

Transcript with_header(Transcript t, const RunConfig& cfg, uint64_t seed) {
  t.header = standard_header(cfg, seed);
  return t;
}

Transcript run_blum(const RunConfig& cfg, uint64_t seed) {
  return run_blum_session(cfg.session_config(seed), cfg.ell);
}

Transcript run_coin_fr(const RunConfig& cfg, uint64_t seed) {
  return run_xor_flip_session(cfg.session_config(seed), cfg.ell, cfg.composed());
}

Transcript run_coin_ff(const RunConfig& cfg, uint64_t seed) {
  SssParams sss(cfg.sigma, FieldSpec::gf2ext(cfg.field_width));
  return run_strong_flip_session(cfg.session_config(seed), sss, cfg.composed());
}

Transcript run_commit(const RunConfig& cfg, uint64_t seed) {
  SssParams sss(cfg.sigma, FieldSpec::gf2ext(cfg.field_width));
  Session sess(cfg.session_config(seed));
  Rng setup(mix_seed(seed, 5));
  MixedKey pk = sess.scheme().gen_hiding(setup);
  Message m = random_message(sss, setup);
  CoinPlanner planner = cfg.composed()
                            ? composed_xor_flip_planner(/*swap_roles=*/true, sess.scheme().key_bits())
                            : hybrid_planner();
  CommitSender sender(Side::A, sss, m, pk, planner, sess.party_rng(Side::A));
  CommitReceiver receiver(Side::B, sss, pk, planner, sess.party_rng(Side::B));
  return sess.run(sender, receiver);
}

Transcript run_zkpk(const RunConfig& cfg, uint64_t seed) {
  Rng setup(mix_seed(seed, 5));
  auto [x, phi] = random_gi_instance(cfg.vertices, 0.5, setup);
  auto enc = parallel_repeat(gi_encoding(cfg.vertices), cfg.sigma, graph_iso_relation());
  ZkpkParams p = make_zkpk_params(enc, graph_iso_relation(),
                                  scheme_key_bits(cfg.backend, cfg.kappa), cfg.composed());
  ZkpkRun run = zkpk_run(cfg.session_config(seed), p, x.serialize(), serialize_permutation(phi));
  return run.transcript;
}

Transcript run_ot(const RunConfig& cfg, uint64_t seed) {
  Rng setup(mix_seed(seed, 5));
  size_t len = (cfg.ell + 7) / 8;
  Bytes m0 = setup.bytes(len), m1 = setup.bytes(len);
  bool c = setup.bit();
  return ot_run(cfg.session_config(seed), m0, m1, c).transcript;
}

Transcript run_sfe(const RunConfig& cfg, uint64_t seed, bool and_gate) {
  Rng setup(mix_seed(seed, 5));
  std::shared_ptr<const PassiveProtocol> f =
      and_gate ? passive_and_via_ot() : passive_xor((cfg.ell + 7) / 8);
  Bytes x1, x2;
  if (and_gate) {
    x1 = Bytes{static_cast<uint8_t>(setup.bit())};
    x2 = Bytes{static_cast<uint8_t>(setup.bit())};
  } else {
    x1 = setup.bytes(f->input_len());
    x2 = setup.bytes(f->input_len());
  }
  SfeParams p = make_sfe_params(f, scheme_key_bits(cfg.backend, cfg.kappa), cfg.composed());
  return run_sfe_session(cfg.session_config(seed), p, x1, x2).transcript;
}

}  // namespace

const std::vector<ProtocolInfo>& protocol_catalog() {
  static const std::vector<ProtocolInfo> catalog = {
      {"blum", {Flavor::Enforceable, Flavor::Random},
       [](const RunConfig& c, uint64_t s) { return with_header(run_blum(c, s), c, s); }},
      {"coin-fr", {Flavor::Enforceable, Flavor::Random},
       [](const RunConfig& c, uint64_t s) { return with_header(run_coin_fr(c, s), c, s); }},
      {"coin-ff", {Flavor::Enforceable, Flavor::Enforceable},
       [](const RunConfig& c, uint64_t s) { return with_header(run_coin_ff(c, s), c, s); }},
      {"commit", {Flavor::Random, Flavor::Enforceable},
       [](const RunConfig& c, uint64_t s) { return with_header(run_commit(c, s), c, s); }},
      {"zkpk", {Flavor::Enforceable, Flavor::Enforceable},
       [](const RunConfig& c, uint64_t s) { return with_header(run_zkpk(c, s), c, s); }},
      {"ot", {Flavor::Uncontrollable, Flavor::Uncontrollable},
       [](const RunConfig& c, uint64_t s) { return with_header(run_ot(c, s), c, s); }},
      {"sfe-xor", {Flavor::Enforceable, Flavor::Enforceable},
       [](const RunConfig& c, uint64_t s) { return with_header(run_sfe(c, s, false), c, s); }},
      {"sfe-and", {Flavor::Enforceable, Flavor::Enforceable},
       [](const RunConfig& c, uint64_t s) { return with_header(run_sfe(c, s, true), c, s); }},
  };
  return catalog;
}

const ProtocolInfo* find_protocol(const std::string& id) {
  for (const auto& p : protocol_catalog())
    if (p.id == id) return &p;
  return nullptr;
}

Transcript run_protocol_session(const RunConfig& cfg, uint64_t session_seed) {
  const ProtocolInfo* p = find_protocol(cfg.protocol);
  if (!p) throw ConfigError("unknown protocol: " + cfg.protocol);
  return p->run(cfg, session_seed);
}

RunConfig config_from_header(const Transcript& t) {
  RunConfig cfg;
  auto need = [&](const std::string& k) -> const std::string& {
    const std::string* v = t.find_header(k);
    if (!v) throw ParseError("transcript header missing key: " + k);
    return *v;
  };
  cfg.protocol = need("proto");
  cfg.mode = parse_run_mode(need("mode"));
  cfg.backend = parse_backend(need("backend"));
  cfg.seed = std::stoull(need("seed"));
  cfg.sigma = static_cast<uint32_t>(std::stoul(need("sigma")));
  cfg.kappa = std::stoull(need("kappa"));
  cfg.ell = std::stoull(need("ell"));
  FieldSpec fs = FieldSpec::parse(need("field"));
  cfg.field_width = fs.width;
  cfg.vertices = static_cast<uint32_t>(std::stoul(need("v")));
  cfg.n = 1;
  return cfg;
}

ReplayReport replay_transcript(const Transcript& recorded) {
  ReplayReport rep;
  RunConfig cfg;
  try {
    cfg = config_from_header(recorded);
    cfg.validate();
  } catch (const std::exception& e) {
    rep.detail = std::string("header rejected: ") + e.what();
    return rep;
  }
  Transcript rerun = run_protocol_session(cfg, cfg.seed);
  if (rerun.same_frames_and_outcomes(recorded)) {
    rep.match = true;
    return rep;
  }
  size_t limit = std::min(rerun.frames.size(), recorded.frames.size());
  rep.first_mismatch_frame = limit;
  for (size_t i = 0; i < limit; ++i) {
    if (!(rerun.frames[i] == recorded.frames[i])) {
      rep.first_mismatch_frame = i;
      break;
    }
  }
  std::ostringstream os;
  if (rerun.frames.size() != recorded.frames.size())
    os << "frame count " << recorded.frames.size() << " vs " << rerun.frames.size() << "; ";
  os << "first differing frame index " << rep.first_mismatch_frame;
  rep.detail = os.str();
  return rep;
}

std::vector<Transcript> parse_transcript_file(const std::string& content) {
  std::vector<Transcript> out;
  size_t pos = 0;
  while (true) {
    size_t start = content.find("SCF1", pos);
    if (start == std::string::npos) break;
    size_t end = content.find("\nE\n", start);
    if (end == std::string::npos) throw ParseError("transcript file: unterminated block");
    out.push_back(Transcript::from_text(content.substr(start, end + 3 - start)));
    pos = end + 3;
  }
  if (out.empty()) throw ParseError("transcript file: no sessions found");
  return out;
}

Outcome session_outcome(const Transcript& t) {
  // the receiving / judging side is B in every catalogued protocol
  return t.out_b;
}

CoinPlanner compose_with_protocol(const std::string& protocol_id, size_t kappa_bits) {
  const ProtocolInfo* info = find_protocol(protocol_id);
  if (!info) throw ConfigError("compose: unknown protocol " + protocol_id);
  FlavorPair both{Flavor::Enforceable, Flavor::Enforceable};
  if (!(info->flavors == both))
    throw ConfigError("compose: " + protocol_id + " is (" + flavor_name(info->flavors.alice) + "," +
                      flavor_name(info->flavors.bob) + "), need (force,force)");
  if (protocol_id != "coin-ff")
    throw ConfigError("compose: " + protocol_id + " cannot realize a coin functionality");
  return composed_strong_flip_planner(kappa_bits);
}

}  // namespace scf
