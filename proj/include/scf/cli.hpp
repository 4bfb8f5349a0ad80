#pragma once

namespace scf {

// Batch front end; returns a process exit code (0 ok, 2 bad config,
// 3 protocol abort under --strict, 4 replay mismatch).
int cli_main(int argc, const char* const* argv);

}  // namespace scf
