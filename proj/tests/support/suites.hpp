// Randomised property suites shared by the unit tests and the acceptance run.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace suite {

struct Outcome {
  int cases = 0;
  int skipped = 0;
  // Individual objects checked (models or answer sets).
  long checked = 0;
  std::vector<std::string> failures;
  double seconds = 0;
};

// Model transfer between the precondition and derivability variants on
// `cases` random annotated modules; cyclic annotation sets are skipped and
// replaced.
Outcome model_transfer(int cases, std::uint64_t seed);

// Every answer-set projection of `cases` random configurations is a legal
// model, by the library checker and by the reference checker.
Outcome answer_set_soundness(int cases, std::uint64_t seed);

// Replays every case of tests/golden/cli.manifest and compares exit code and
// stdout with tests/golden/<name>.out. `extra` is appended to each command
// line that has a subcommand.
Outcome cli_goldens(const std::string& extra = "");

}  // namespace suite
