// Copyright 2026 The teleportlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Subcommand implementations behind the teleportlab CLI. Each command returns
// its exit code together with the JSON report so that tests can drive them
// without a process boundary.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "teleportlab/tensor.hpp"

namespace teleportlab::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitThreshold = 1,
    kExitUsage = 2,
    kExitValidation = 3,
};

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Maps an exception escaping a command to the exit-code contract.
int exit_code_for(const std::exception& e);

struct CommandResult {
    int exit_code = kExitOk;
    nlohmann::json report;
    std::string summary;
};

/// Parses "re" or "re,im".
Complex parse_complex(const std::string& text);
/// Parses "re[,im];re[,im];...".
std::vector<Complex> parse_amplitudes(const std::string& text);

/// --seed if given, else TELEPORTLAB_SEED, else an OS-drawn seed announced on `note`.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::ostream& note);

struct InputSpec {
    std::optional<std::string> alpha;
    std::optional<std::string> beta;
    std::optional<double> theta;
    std::optional<double> phi;
    std::optional<std::string> amps;
    bool random = false;
};

struct TeleportOptions {
    std::size_t d = 2;
    InputSpec input;
    std::size_t runs = 1;
    std::uint64_t seed = 0;
    std::optional<std::size_t> forced;
    double threshold = 1.0 - 1e-9;
    std::size_t max_transcripts = 1000;
};

struct RemotePrepOptions {
    InputSpec input;
    std::size_t runs = 1;
    std::uint64_t seed = 0;
    std::optional<std::size_t> forced;
    double threshold = 1.0 - 1e-9;
    std::size_t max_transcripts = 1000;
};

struct BasisCheckOptions {
    std::optional<std::string> builtin;     ///< bell | generalized-bell | computational
    std::optional<std::string> basis_file;  ///< JSON array of elements of [re, im] pairs
    std::size_t d = 2;
    std::string resource = "builtin";       ///< "builtin" or a path to a JSON state
};

struct SweepOptions {
    std::vector<std::size_t> dims;
    std::size_t runs = 100;
    std::uint64_t seed = 0;
    double threshold = 1.0 - 1e-9;
};

/// `echo` is the command line as typed; it is copied into the report.
CommandResult cmd_teleport(const TeleportOptions& opts, const std::vector<std::string>& echo);
CommandResult cmd_remote_prep(const RemotePrepOptions& opts, const std::vector<std::string>& echo);
CommandResult cmd_basis_check(const BasisCheckOptions& opts, const std::vector<std::string>& echo);
CommandResult cmd_sweep(const SweepOptions& opts, const std::vector<std::string>& echo);

}  // namespace teleportlab::cli
