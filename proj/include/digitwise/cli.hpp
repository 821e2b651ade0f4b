#pragma once

// Command-line front end. Subcommands:
//   synth, train-probes, eval-probes, transfer-eval, patch, gen-queries,
//   analyze-errors, pca, calibrate
//
// Every run writes <out>.config.json holding the subcommand and every
// resolved option; `digitwise --config <file>` replays it. Exit codes:
// 0 success, 1 usage error, 2 data error. DIGITWISE_THREADS sets the worker
// count; outputs do not depend on it.

#include <iosfwd>
#include <string>
#include <vector>

namespace digitwise::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parses "2..14,1000,2000" into {2, 3, ..., 14, 1000, 2000}.
[[nodiscard]] std::vector<long long> parse_int_list(const std::string& spec);

}  // namespace digitwise::cli
