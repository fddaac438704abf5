// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ecgbench::cli {

enum ExitCode : int { kOk = 0, kEvaluationError = 1, kUsageError = 2 };

/// Entry point behind the `ecgbench` executable. `args` excludes the program name.
/// Subcommands: synth, run, report, validate.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ecgbench::cli
