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

#include "teleportlab/net/service.hpp"

#include <sys/socket.h>

#include <algorithm>
#include <array>
#include <condition_variable>
#include <cstdio>
#include <optional>

#include "teleportlab/entanglement.hpp"
#include "teleportlab/measurement.hpp"
#include "teleportlab/protocols.hpp"
#include "teleportlab/report.hpp"
#include "teleportlab/rng.hpp"

namespace teleportlab::net {

using nlohmann::json;

namespace {

constexpr std::array<std::size_t, 2> kSenderPair{0, 1};
constexpr std::array<std::size_t, 1> kReceiver{2};
constexpr auto kPollInterval = std::chrono::milliseconds(200);

// Error raised inside request handling; becomes an ERROR reply.
struct RequestError {
    int code;
    std::string detail;
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h = (h ^ c) * 0x100000001b3ULL;
    }
    return h;
}

bool valid_session_token(const std::string& id) {
    return !id.empty() && id.size() <= 64 && std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
    });
}

// Wire-parsed non-negative numbers come out unsigned, values built in process
// are often signed; accept both.
bool is_count(const json& j) {
    return j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0);
}

std::size_t require_index(const json& request, const char* key, std::size_t bound) {
    if (!request.contains(key) || !is_count(request[key])) {
        throw RequestError{kBadRequest, std::string("missing or invalid \"") + key + "\""};
    }
    const auto v = request[key].get<std::size_t>();
    if (v >= bound) {
        throw RequestError{kBadRequest, std::string("\"") + key + "\" out of range"};
    }
    return v;
}

}  // namespace

class Session {
public:
    Session(std::string id, CounterRng rng) : id_(std::move(id)), rng_(rng) {}

    const std::string& id() const { return id_; }

    json prepare(const json& request) {
        require_phase(Phase::open, "PREPARE");
        if (!request.contains("d") || !is_count(request["d"])) {
            throw RequestError{kBadRequest, "PREPARE needs a non-negative integer \"d\""};
        }
        const auto d = request["d"].get<std::size_t>();
        if (d < 2 || d * d * d > kMaxTotalDimension) {
            throw RequestError{kBadRequest, "unsupported dimension d=" + std::to_string(d)};
        }
        const json spec = request.value("input", json::object());
        std::optional<PureState> input;
        try {
            if (spec.value("random", false)) {
                if (!spec.contains("seed") || !is_count(spec["seed"])) {
                    throw RequestError{kBadRequest, "random input needs a non-negative integer \"seed\""};
                }
                CounterRng input_rng(spec["seed"].get<std::uint64_t>());
                input = random_state(RegisterShape({d}), input_rng);
            } else if (spec.contains("amps")) {
                input = make_state(RegisterShape({d}), amps_from_json(spec["amps"]));
            } else {
                throw RequestError{kBadRequest, "PREPARE input must be {random, seed} or {amps}"};
            }
        } catch (const std::invalid_argument& e) {
            throw RequestError{kBadRequest, e.what()};
        }
        scheme_.emplace(TeleportScheme::qudit(d));
        d_ = d;
        input_ = input;
        state_ = tensor(*input, scheme_->resource());
        phase_ = Phase::prepared;
        auto reply = make_message(msg::kAck, id_);
        reply["of"] = msg::kPrepare;
        reply["d"] = d;
        return reply;
    }

    json measure() {
        require_phase(Phase::prepared, "MEASURE_REQUEST");
        const auto outcome = sample_outcome(*state_, scheme_->basis(), kSenderPair, rng_);
        state_ = outcome.post_state;
        outcome_ = outcome.index;
        phase_ = Phase::measured;
        auto reply = make_message(msg::kMeasureResult, id_);
        reply["outcome"] = outcome.index;
        reply["a"] = outcome.index / d_;
        reply["b"] = outcome.index % d_;
        return reply;
    }

    json classical_send(const json& request) {
        if (phase_ == Phase::open || phase_ == Phase::prepared) {
            throw RequestError{kPhaseViolation, "CLASSICAL_SEND before the measurement"};
        }
        if (classical_) {
            throw RequestError{kPhaseViolation, "classical data already sent for this session"};
        }
        const auto a = require_index(request, "a", d_);
        const auto b = require_index(request, "b", d_);
        if (!request.contains("bits") || !request["bits"].is_string() ||
            decode_outcome_bits(request["bits"].get<std::string>(), d_) != std::make_pair(a, b)) {
            throw RequestError{kBadRequest, "\"bits\" does not encode (a, b)"};
        }
        classical_ = std::make_pair(a, b);
        cv_.notify_all();
        auto reply = make_message(msg::kAck, id_);
        reply["of"] = msg::kClassicalSend;
        return reply;
    }

    json correct(const json& request) {
        require_phase(Phase::measured, "CORRECT_REQUEST");
        const auto a = require_index(request, "a", d_);
        const auto b = require_index(request, "b", d_);
        state_ = make_state(apply_to_factors(correction_for(a, b, d_).op(), kReceiver, *state_));
        phase_ = Phase::corrected;
        auto reply = make_message(msg::kAck, id_);
        reply["of"] = msg::kCorrectRequest;
        return reply;
    }

    json verify() {
        if (phase_ != Phase::corrected && phase_ != Phase::verified) {
            throw RequestError{kPhaseViolation, std::string("VERIFY_REQUEST in phase ") + phase_name(phase_)};
        }
        const auto received = make_state(contract_factors(scheme_->basis().element(outcome_), kSenderPair, *state_));
        phase_ = Phase::verified;
        auto reply = make_message(msg::kVerifyResult, id_);
        reply["fidelity"] = fidelity(*input_, received);
        return reply;
    }

    /// Waits for the sender's classical data; nullopt on timeout or shutdown.
    std::optional<json> wait_for_classical(std::unique_lock<std::mutex>& lock, std::chrono::milliseconds timeout,
                                           const std::atomic<bool>& running) {
        const auto deadline = std::chrono::steady_clock::now() + timeout;
        while (!classical_ && running.load()) {
            if (cv_.wait_until(lock, std::min(deadline, std::chrono::steady_clock::now() + kPollInterval)) ==
                    std::cv_status::timeout &&
                std::chrono::steady_clock::now() >= deadline) {
                break;
            }
        }
        if (!classical_) {
            return std::nullopt;
        }
        auto relay = make_message(msg::kClassicalSend, id_);
        relay["a"] = classical_->first;
        relay["b"] = classical_->second;
        relay["bits"] = encode_outcome_bits(classical_->first, classical_->second, d_);
        relay["d"] = d_;
        return relay;
    }

    std::mutex& mutex() { return mutex_; }
    void wake() { cv_.notify_all(); }

private:
    void require_phase(Phase wanted, const char* request) const {
        if (phase_ != wanted) {
            throw RequestError{kPhaseViolation, std::string(request) + " in phase " + phase_name(phase_)};
        }
    }

    std::string id_;
    CounterRng rng_;
    std::mutex mutex_;
    std::condition_variable cv_;
    Phase phase_ = Phase::open;
    std::size_t d_ = 0;
    std::optional<TeleportScheme> scheme_;
    std::optional<PureState> input_;
    std::optional<PureState> state_;
    std::size_t outcome_ = 0;
    std::optional<std::pair<std::size_t, std::size_t>> classical_;
};

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::open: return "open";
        case Phase::prepared: return "prepared";
        case Phase::measured: return "measured";
        case Phase::corrected: return "corrected";
        case Phase::verified: return "verified";
    }
    return "unknown";
}

Service::Service(ServiceConfig config) : config_(std::move(config)) {}

Service::~Service() { stop(); }

void Service::start() {
    listener_ = std::make_unique<Listener>(config_.bind);
    running_ = true;
    accept_thread_ = std::thread([this] { accept_loop(); });
}

std::uint16_t Service::port() const { return listener_ ? listener_->port() : 0; }

void Service::stop() {
    if (!running_.exchange(false)) {
        if (accept_thread_.joinable()) {
            accept_thread_.join();
        }
        return;
    }
    if (accept_thread_.joinable()) {
        accept_thread_.join();
    }
    {
        std::lock_guard lock(connections_mutex_);
        for (int fd : connection_fds_) {
            ::shutdown(fd, SHUT_RDWR);
        }
    }
    {
        std::lock_guard lock(sessions_mutex_);
        for (auto& [id, s] : sessions_) {
            s->wake();
        }
    }
    std::vector<std::thread> threads;
    {
        std::lock_guard lock(connections_mutex_);
        threads.swap(connection_threads_);
    }
    for (auto& t : threads) {
        t.join();
    }
    if (listener_) {
        listener_->close();
    }
    std::lock_guard lock(stop_mutex_);
    stop_cv_.notify_all();
}

void Service::wait() {
    std::unique_lock lock(stop_mutex_);
    stop_cv_.wait(lock, [this] { return !running_.load(); });
}

void Service::note(const std::string& line) {
    if (config_.log != nullptr) {
        std::lock_guard lock(log_mutex_);
        *config_.log << line << '\n';
        config_.log->flush();
    }
}

void Service::accept_loop() {
    while (running_) {
        auto sock = listener_->accept(kPollInterval);
        if (!sock) {
            continue;
        }
        std::lock_guard lock(connections_mutex_);
        connection_fds_.push_back(sock->fd());
        connection_threads_.emplace_back([this, s = std::move(*sock)]() mutable { serve_connection(std::move(s)); });
    }
}

std::shared_ptr<Session> Service::find(const std::string& id) {
    std::lock_guard lock(sessions_mutex_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::shared_ptr<Session> Service::open_session(const std::string& requested_id) {
    std::lock_guard lock(sessions_mutex_);
    std::string id = requested_id;
    if (id.empty()) {
        do {
            char buf[24];
            std::snprintf(buf, sizeof buf, "s%016llx",
                          static_cast<unsigned long long>(mix64(config_.seed ^ mix64(next_session_++))));
            id = buf;
        } while (sessions_.count(id) != 0);
    } else if (const auto it = sessions_.find(id); it != sessions_.end()) {
        return it->second;
    }
    const CounterRng root(config_.seed);
    auto session = std::make_shared<Session>(id, root.split(fnv1a(id)));
    sessions_.emplace(id, session);
    return session;
}

json Service::handle(const json& request, std::string& role, std::string& session_id) {
    const auto type = request.value("type", std::string{});
    try {
        if (type == msg::kHello) {
            const auto requested_role = request.value("role", std::string("alice"));
            if (requested_role != "alice" && requested_role != "bob") {
                throw RequestError{kBadRequest, "role must be \"alice\" or \"bob\""};
            }
            std::string requested_id;
            if (request.contains("session_id")) {
                if (!request["session_id"].is_string() ||
                    !valid_session_token(request["session_id"].get<std::string>())) {
                    throw RequestError{kBadRequest, "session_id must be 1-64 characters of [A-Za-z0-9_-]"};
                }
                requested_id = request["session_id"].get<std::string>();
            } else if (requested_role == "bob") {
                throw RequestError{kBadRequest, "bob must name the session to join"};
            }
            const auto session = open_session(requested_id);
            role = requested_role;
            session_id = session->id();
            auto reply = make_message(msg::kSessionGrant, session_id);
            reply["role"] = role;
            return reply;
        }

        if (!request.contains("session_id") || !request["session_id"].is_string()) {
            throw RequestError{kBadRequest, std::string("missing session_id on ") + (type.empty() ? "message" : type)};
        }
        const auto id = request["session_id"].get<std::string>();
        const auto session = find(id);
        if (!session) {
            throw RequestError{kUnknownSession, "unknown session " + id};
        }
        std::lock_guard lock(session->mutex());
        if (type == msg::kPrepare) {
            return session->prepare(request);
        }
        if (type == msg::kMeasureRequest) {
            return session->measure();
        }
        if (type == msg::kClassicalSend) {
            return session->classical_send(request);
        }
        if (type == msg::kCorrectRequest) {
            return session->correct(request);
        }
        if (type == msg::kVerifyRequest) {
            return session->verify();
        }
        throw RequestError{kBadRequest, "unexpected message type \"" + type + "\""};
    } catch (const RequestError& e) {
        const auto sid = request.contains("session_id") && request["session_id"].is_string()
                             ? request["session_id"].get<std::string>()
                             : std::string{};
        return make_error(e.code, e.detail, sid);
    } catch (const std::exception& e) {
        return make_error(kInternal, e.what());
    }
}

void Service::relay_to_receiver(Socket& sock, const std::string& session_id) {
    const auto session = find(session_id);
    if (!session) {
        return;
    }
    std::optional<json> relay;
    {
        std::unique_lock lock(session->mutex());
        relay = session->wait_for_classical(lock, config_.relay_timeout, running_);
    }
    if (relay) {
        note(session_id + " relay " + relay->dump());
        sock.send_message(*relay);
    } else if (running_) {
        sock.send_message(make_error(kTimeout, "no classical data arrived", session_id));
    }
}

void Service::serve_connection(Socket sock) {
    std::string role;
    std::string session_id;
    try {
        while (running_) {
            std::optional<json> request;
            try {
                request = sock.receive_message(kPollInterval);
            } catch (const ProtocolError& e) {
                sock.send_message(make_error(kBadRequest, e.what()));
                break;
            }
            if (!request) {
                continue;
            }
            note("recv " + request->dump());
            const auto reply = handle(*request, role, session_id);
            note("send " + reply.dump());
            sock.send_message(reply);
            if (reply["type"] == msg::kSessionGrant && role == "bob") {
                relay_to_receiver(sock, session_id);
            }
        }
    } catch (const ConnectionError&) {
        // Peer went away.
    }
    std::lock_guard lock(connections_mutex_);
    std::erase(connection_fds_, sock.fd());
}

}  // namespace teleportlab::net
