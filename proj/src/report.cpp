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

#include "teleportlab/report.hpp"

#include <algorithm>
#include <stdexcept>

namespace teleportlab {

using nlohmann::json;

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw std::invalid_argument("expected a complex number as [re, im], got " + j.dump());
}

json amps_to_json(const std::vector<Complex>& amps) {
    json out = json::array();
    for (const auto& a : amps) {
        out.push_back(complex_to_json(a));
    }
    return out;
}

std::vector<Complex> amps_from_json(const json& j) {
    if (!j.is_array()) {
        throw std::invalid_argument("expected an array of complex amplitudes");
    }
    std::vector<Complex> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        out.push_back(complex_from_json(e));
    }
    return out;
}

json transcript_to_json(const ProtocolTranscript& t) {
    json j{
        {"protocol", t.protocol},
        {"outcome_index", t.outcome_index},
        {"classical_bits_sent", t.classical_bits_sent},
        {"correction", t.correction.name()},
        {"pre_correction_fidelity", t.pre_correction_fidelity},
        {"post_correction_fidelity", t.post_correction_fidelity},
    };
    if (t.shift_phase) {
        j["shift"] = t.shift_phase->first;
        j["phase"] = t.shift_phase->second;
    }
    j["seed"] = t.seed ? json(*t.seed) : json(nullptr);
    return j;
}

void RunStats::add(std::size_t outcome, double fidelity) {
    ++histogram.at(outcome);
    ++runs;
    fidelity_sum_ += fidelity;
    min_fidelity = std::min(min_fidelity, fidelity);
    // Rounding in the running sum can push the mean an ulp below the minimum.
    mean_fidelity = std::max(min_fidelity, fidelity_sum_ / static_cast<double>(runs));
}

json RunStats::to_json() const {
    return json{{"histogram", histogram},
                {"runs", runs},
                {"min_fidelity", runs ? json(min_fidelity) : json(nullptr)},
                {"mean_fidelity", runs ? json(mean_fidelity) : json(nullptr)}};
}

json strip_durations(json j) {
    if (j.is_object()) {
        j.erase("duration_ms");
        for (auto& [key, value] : j.items()) {
            value = strip_durations(value);
        }
    } else if (j.is_array()) {
        for (auto& value : j) {
            value = strip_durations(value);
        }
    }
    return j;
}

}  // namespace teleportlab
