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

// Wire format for the loopback teleportation demo. Every message is a JSON
// object framed by a 4-byte big-endian length prefix. See docs/wire-protocol.md.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <json.hpp>

namespace teleportlab::net {

inline constexpr std::size_t kMaxFrameBytes = 1 << 20;

namespace msg {
inline constexpr std::string_view kHello = "HELLO";
inline constexpr std::string_view kSessionGrant = "SESSION_GRANT";
inline constexpr std::string_view kPrepare = "PREPARE";
inline constexpr std::string_view kMeasureRequest = "MEASURE_REQUEST";
inline constexpr std::string_view kMeasureResult = "MEASURE_RESULT";
inline constexpr std::string_view kClassicalSend = "CLASSICAL_SEND";
inline constexpr std::string_view kCorrectRequest = "CORRECT_REQUEST";
inline constexpr std::string_view kVerifyRequest = "VERIFY_REQUEST";
inline constexpr std::string_view kVerifyResult = "VERIFY_RESULT";
inline constexpr std::string_view kAck = "ACK";
inline constexpr std::string_view kError = "ERROR";
}  // namespace msg

/// ERROR codes, HTTP-flavoured.
enum ErrorCode : int {
    kBadRequest = 400,
    kUnknownSession = 404,
    kTimeout = 408,
    kPhaseViolation = 409,
    kInternal = 500,
};

/// Raised for frames or messages that violate the wire format.
class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Length prefix plus UTF-8 JSON body.
std::string encode_frame(const nlohmann::json& message);

/// Big-endian length from the first four bytes of `header`.
std::uint32_t decode_length(std::string_view header);

/// Parses a frame body; throws ProtocolError unless it is a JSON object with a string "type".
nlohmann::json decode_body(std::string_view body);

nlohmann::json make_message(std::string_view type, const std::string& session_id = {});
nlohmann::json make_error(int code, const std::string& detail, const std::string& session_id = {});

/// The (a, b) payload as 2 * ceil(log2 d) bits: a then b, each most-significant
/// bit first, one '0'/'1' character per bit.
std::string encode_outcome_bits(std::size_t a, std::size_t b, std::size_t d);
/// Inverse of encode_outcome_bits; nullopt if the string has the wrong length,
/// a non-binary character, or a value >= d.
std::optional<std::pair<std::size_t, std::size_t>> decode_outcome_bits(const std::string& bits, std::size_t d);

struct Endpoint {
    std::string host;
    std::uint16_t port = 0;
};

/// "host:port"; throws std::invalid_argument on anything else.
Endpoint parse_endpoint(const std::string& text);

}  // namespace teleportlab::net
