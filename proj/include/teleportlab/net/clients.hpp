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

// Sender (Alice) and receiver (Bob) clients for the loopback demo. Neither
// client ever holds quantum state; they only exchange classical messages.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "teleportlab/net/wire.hpp"
#include "teleportlab/tensor.hpp"

namespace teleportlab::net {

/// Client exit codes.
enum ClientExit : int {
    kClientOk = 0,
    kClientFidelityFailure = 1,
    kClientProtocolError = 3,
    kClientConnectFailure = 4,
    kClientTimeout = 5,
};

struct AliceOptions {
    Endpoint service;
    std::size_t d = 2;
    /// Explicit input amplitudes; when absent the service draws a random input from `input_seed`.
    std::optional<std::vector<Complex>> amps;
    std::uint64_t input_seed = 0;
    /// Requested session id; empty lets the service choose.
    std::string session_id;
    /// Sends MEASURE_REQUEST twice (exercises the phase machine).
    bool duplicate_measure = false;
    std::chrono::milliseconds timeout{10000};
};

struct AliceResult {
    int exit_code = kClientOk;
    std::string session_id;
    std::optional<std::size_t> a;
    std::optional<std::size_t> b;
    std::optional<int> error_code;
    std::string detail;
    /// Every message Alice received, in order.
    std::vector<nlohmann::json> received;
};

AliceResult alice_run(const AliceOptions& opts);

struct BobOptions {
    Endpoint service;
    std::string session_id;
    /// Corrupts the received (a, b) to (a + 1, b + 1) mod d before correcting.
    bool tamper = false;
    std::chrono::milliseconds timeout{10000};
    double threshold = 1.0 - 1e-9;
};

struct BobResult {
    int exit_code = kClientOk;
    std::optional<std::size_t> a;
    std::optional<std::size_t> b;
    std::string bits;
    std::optional<double> fidelity;
    std::optional<int> error_code;
    std::string detail;
    std::vector<nlohmann::json> received;
};

BobResult bob_run(const BobOptions& opts);

}  // namespace teleportlab::net
