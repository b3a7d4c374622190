// Copyright 2026 The qproc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <ostream>

#include "config.hpp"

namespace qproc::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kUsageError = 2 };

/// Result of one command: the document to write and its exit code.
struct CommandResult {
    Json document;
    /// Pre-rendered CSV, used with --format csv.
    std::string csv;
    int exit_code = kSuccess;
};

CommandResult cmd_bound(const ProblemConfig &c);
CommandResult cmd_protocol(const ProblemConfig &c);
CommandResult cmd_simulate(const ProblemConfig &c);
CommandResult cmd_geometry(const ProblemConfig &c);
CommandResult cmd_verify(const ProblemConfig &c);

/// Full command line. Results go to the output file or `out`; errors are
/// JSON objects on `err`.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace qproc::cli
