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

#include "teleportlab/net/clients.hpp"

#include "teleportlab/net/socket.hpp"
#include "teleportlab/report.hpp"

namespace teleportlab::net {

using nlohmann::json;

namespace {

// A reply that ends the client run early.
struct Abort {
    int exit_code;
    std::optional<int> error_code;
    std::string detail;
};

class Channel {
public:
    Channel(Socket sock, std::chrono::milliseconds timeout, std::vector<json>& log)
        : sock_(std::move(sock)), timeout_(timeout), log_(log) {}

    json await(std::string_view expected) {
        std::optional<json> reply;
        try {
            reply = sock_.receive_message(timeout_);
        } catch (const std::exception& e) {
            throw Abort{kClientConnectFailure, std::nullopt, e.what()};
        }
        if (!reply) {
            throw Abort{kClientTimeout, std::nullopt, "timed out waiting for " + std::string(expected)};
        }
        log_.push_back(*reply);
        const auto type = (*reply)["type"].get<std::string>();
        if (type == msg::kError) {
            const int code = reply->value("code", 0);
            throw Abort{code == kTimeout ? kClientTimeout : kClientProtocolError, code,
                        reply->value("detail", std::string{})};
        }
        if (type != expected) {
            throw Abort{kClientProtocolError, std::nullopt, "expected " + std::string(expected) + ", got " + type};
        }
        return *reply;
    }

    json call(const json& request, std::string_view expected) {
        try {
            sock_.send_message(request);
        } catch (const std::exception& e) {
            throw Abort{kClientConnectFailure, std::nullopt, e.what()};
        }
        return await(expected);
    }

private:
    Socket sock_;
    std::chrono::milliseconds timeout_;
    std::vector<json>& log_;
};

Socket dial(const Endpoint& ep) {
    try {
        return connect_to(ep);
    } catch (const std::exception& e) {
        throw Abort{kClientConnectFailure, std::nullopt, e.what()};
    }
}

}  // namespace

AliceResult alice_run(const AliceOptions& opts) {
    AliceResult result;
    try {
        Channel ch(dial(opts.service), opts.timeout, result.received);

        auto hello = make_message(msg::kHello, opts.session_id);
        hello["role"] = "alice";
        result.session_id = ch.call(hello, msg::kSessionGrant)["session_id"].get<std::string>();

        auto prepare = make_message(msg::kPrepare, result.session_id);
        prepare["d"] = opts.d;
        prepare["input"] = opts.amps ? json{{"amps", amps_to_json(*opts.amps)}}
                                     : json{{"random", true}, {"seed", opts.input_seed}};
        ch.call(prepare, msg::kAck);

        const auto measured = ch.call(make_message(msg::kMeasureRequest, result.session_id), msg::kMeasureResult);
        const auto a = measured["a"].get<std::size_t>();
        const auto b = measured["b"].get<std::size_t>();
        result.a = a;
        result.b = b;
        if (opts.duplicate_measure) {
            ch.call(make_message(msg::kMeasureRequest, result.session_id), msg::kMeasureResult);
        }

        auto send = make_message(msg::kClassicalSend, result.session_id);
        send["a"] = a;
        send["b"] = b;
        send["bits"] = encode_outcome_bits(a, b, opts.d);
        ch.call(send, msg::kAck);
    } catch (const Abort& abort) {
        result.exit_code = abort.exit_code;
        result.error_code = abort.error_code;
        result.detail = abort.detail;
    } catch (const std::exception& e) {
        // Malformed replies (missing or mistyped fields).
        result.exit_code = kClientProtocolError;
        result.detail = e.what();
    }
    return result;
}

BobResult bob_run(const BobOptions& opts) {
    BobResult result;
    try {
        Channel ch(dial(opts.service), opts.timeout, result.received);

        auto hello = make_message(msg::kHello, opts.session_id);
        hello["role"] = "bob";
        ch.call(hello, msg::kSessionGrant);

        const auto classical = ch.await(msg::kClassicalSend);
        const auto d = classical["d"].get<std::size_t>();
        result.bits = classical["bits"].get<std::string>();
        const auto decoded = decode_outcome_bits(result.bits, d);
        if (!decoded) {
            throw Abort{kClientProtocolError, std::nullopt, "undecodable classical bits " + result.bits};
        }
        auto [a, b] = *decoded;
        if (opts.tamper) {
            a = (a + 1) % d;
            b = (b + 1) % d;
        }
        result.a = a;
        result.b = b;

        auto correct = make_message(msg::kCorrectRequest, opts.session_id);
        correct["a"] = a;
        correct["b"] = b;
        ch.call(correct, msg::kAck);

        const auto verified = ch.call(make_message(msg::kVerifyRequest, opts.session_id), msg::kVerifyResult);
        result.fidelity = verified["fidelity"].get<double>();
        result.exit_code = *result.fidelity >= opts.threshold ? kClientOk : kClientFidelityFailure;
    } catch (const Abort& abort) {
        result.exit_code = abort.exit_code;
        result.error_code = abort.error_code;
        result.detail = abort.detail;
    } catch (const std::exception& e) {
        // Malformed replies (missing or mistyped fields).
        result.exit_code = kClientProtocolError;
        result.detail = e.what();
    }
    return result;
}

}  // namespace teleportlab::net
