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

#include "teleportlab/net/wire.hpp"

#include <stdexcept>

#include "teleportlab/protocols.hpp"

namespace teleportlab::net {

using nlohmann::json;

std::string encode_frame(const json& message) {
    const auto body = message.dump();
    if (body.size() > kMaxFrameBytes) {
        throw ProtocolError("message exceeds the frame size limit");
    }
    const auto n = static_cast<std::uint32_t>(body.size());
    std::string frame;
    frame.reserve(4 + body.size());
    frame.push_back(static_cast<char>((n >> 24) & 0xff));
    frame.push_back(static_cast<char>((n >> 16) & 0xff));
    frame.push_back(static_cast<char>((n >> 8) & 0xff));
    frame.push_back(static_cast<char>(n & 0xff));
    frame += body;
    return frame;
}

std::uint32_t decode_length(std::string_view header) {
    if (header.size() < 4) {
        throw ProtocolError("short frame header");
    }
    std::uint32_t n = 0;
    for (int i = 0; i < 4; ++i) {
        n = (n << 8) | static_cast<unsigned char>(header[static_cast<std::size_t>(i)]);
    }
    return n;
}

json decode_body(std::string_view body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) {
        throw ProtocolError("frame body is not valid JSON");
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        throw ProtocolError("message must be a JSON object with a string \"type\"");
    }
    return j;
}

json make_message(std::string_view type, const std::string& session_id) {
    json j{{"type", type}};
    if (!session_id.empty()) {
        j["session_id"] = session_id;
    }
    return j;
}

json make_error(int code, const std::string& detail, const std::string& session_id) {
    auto j = make_message(msg::kError, session_id);
    j["code"] = code;
    j["detail"] = detail;
    return j;
}

std::string encode_outcome_bits(std::size_t a, std::size_t b, std::size_t d) {
    if (d < 2 || a >= d || b >= d) {
        throw std::invalid_argument("outcome (a, b) out of range");
    }
    const auto m = bits_for(d);
    std::string bits;
    for (auto value : {a, b}) {
        for (std::size_t i = m; i-- > 0;) {
            bits.push_back(((value >> i) & 1U) ? '1' : '0');
        }
    }
    return bits;
}

std::optional<std::pair<std::size_t, std::size_t>> decode_outcome_bits(const std::string& bits, std::size_t d) {
    if (d < 2) {
        return std::nullopt;
    }
    const auto m = bits_for(d);
    if (bits.size() != 2 * m) {
        return std::nullopt;
    }
    std::size_t values[2] = {0, 0};
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1') {
            return std::nullopt;
        }
        auto& v = values[i / m];
        v = (v << 1) | static_cast<std::size_t>(bits[i] == '1');
    }
    if (values[0] >= d || values[1] >= d) {
        return std::nullopt;
    }
    return std::make_pair(values[0], values[1]);
}

Endpoint parse_endpoint(const std::string& text) {
    const auto colon = text.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
        throw std::invalid_argument("expected HOST:PORT, got '" + text + "'");
    }
    const auto port_text = text.substr(colon + 1);
    std::size_t used = 0;
    unsigned long port = 0;
    try {
        port = std::stoul(port_text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad port in '" + text + "'");
    }
    if (used != port_text.size() || port > 65535) {
        throw std::invalid_argument("bad port in '" + text + "'");
    }
    return {text.substr(0, colon), static_cast<std::uint16_t>(port)};
}

}  // namespace teleportlab::net
