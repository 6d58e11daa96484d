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

// JSON encoding shared by the CLI reports and the loopback demo.
// Complex numbers are [re, im] pairs.

#include <string>
#include <vector>

#include <json.hpp>

#include "teleportlab/protocols.hpp"
#include "teleportlab/tensor.hpp"

namespace teleportlab {

inline constexpr const char* kReportSchema = "teleportlab/1";

nlohmann::json complex_to_json(Complex z);
/// Accepts [re, im] or a bare number. Throws std::invalid_argument otherwise.
Complex complex_from_json(const nlohmann::json& j);

nlohmann::json amps_to_json(const std::vector<Complex>& amps);
std::vector<Complex> amps_from_json(const nlohmann::json& j);

nlohmann::json transcript_to_json(const ProtocolTranscript& t);

/// Outcome histogram with fidelity summary; counts always sum to `runs`.
struct RunStats {
    std::vector<std::size_t> histogram;
    std::size_t runs = 0;
    double min_fidelity = 1.0;
    double mean_fidelity = 0.0;

    explicit RunStats(std::size_t outcomes) : histogram(outcomes, 0) {}
    void add(std::size_t outcome, double fidelity);
    nlohmann::json to_json() const;

private:
    double fidelity_sum_ = 0.0;
};

/// Removes every "duration_ms" key, recursively. Reports are byte-identical
/// for identical inputs once this is applied.
nlohmann::json strip_durations(nlohmann::json j);

}  // namespace teleportlab
