#pragma once

#include "scf/coinflip.hpp"
#include "scf/ot_sfe.hpp"
#include "scf/zkpk.hpp"

namespace scf {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RunMode { Hybrid, Composed, QuantumRealistic };

const char* run_mode_name(RunMode m);
RunMode parse_run_mode(const std::string& s);

// One bundle of knobs for every protocol the batch front end can launch;
// validate() rejects inconsistent combinations before anything runs.
struct RunConfig {
  std::string protocol = "coin-ff";
  uint64_t n = 1;
  uint64_t seed = 1;
  uint32_t sigma = 1;        // share parameter (coin-ff, commit) / repetitions (zkpk)
  size_t kappa = 128;        // ideal-backend key bits
  size_t ell = 8;            // outcome bits (blum, coin-fr)
  uint32_t field_width = 8;  // gf2 width (coin-ff, commit)
  uint32_t vertices = 4;     // graph size (zkpk)
  BackendId backend = BackendId::Ideal;
  RunMode mode = RunMode::Hybrid;
  bool strict = false;
  std::string out_path;

  void validate() const;
  SessionConfig session_config(uint64_t session_seed) const;
  bool composed() const { return mode == RunMode::Composed; }
};

struct ProtocolInfo {
  std::string id;
  FlavorPair flavors;
  // runs one seeded session and returns its transcript (header included)
  std::function<Transcript(const RunConfig&, uint64_t session_seed)> run;
};

const std::vector<ProtocolInfo>& protocol_catalog();
const ProtocolInfo* find_protocol(const std::string& id);

// Session transcript with the standard header for replay.
Transcript run_protocol_session(const RunConfig& cfg, uint64_t session_seed);

// Rebuild the config a transcript was produced with.
RunConfig config_from_header(const Transcript& t);

// Re-execute under the recorded seeds and compare frames and outcomes.
struct ReplayReport {
  bool match = false;
  size_t first_mismatch_frame = 0;  // valid when !match
  std::string detail;
};
ReplayReport replay_transcript(const Transcript& recorded);

std::vector<Transcript> parse_transcript_file(const std::string& content);

// The per-session outcome a statistic should be computed from (the honest /
// receiving side's local output).
Outcome session_outcome(const Transcript& t);

// Substitute a real coin-flip protocol for the ideal functionality: every
// ideal invocation becomes an inlined sub-session of the named protocol.
// Only a protocol enforceable on both sides qualifies; anything weaker is
// rejected, because a simulator must be able to steer it from either seat.
CoinPlanner compose_with_protocol(const std::string& protocol_id, size_t kappa_bits);

}  // namespace scf
