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

// The resource service: the only process that holds quantum state. Clients
// drive a session through prepared -> measured -> corrected -> verified and
// exchange nothing but classical data with each other.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "teleportlab/net/socket.hpp"
#include "teleportlab/net/wire.hpp"

namespace teleportlab::net {

enum class Phase { open, prepared, measured, corrected, verified };

const char* phase_name(Phase p);

struct ServiceConfig {
    Endpoint bind{"127.0.0.1", 0};
    std::uint64_t seed = 0;
    /// How long a waiting receiver connection is held open for classical data.
    std::chrono::milliseconds relay_timeout{30000};
    /// Optional request log, one line per message.
    std::ostream* log = nullptr;
};

class Session;

class Service {
public:
    explicit Service(ServiceConfig config);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds and starts the accept loop on a background thread.
    void start();
    /// Stops accepting, drops open connections, and joins all threads.
    void stop();
    /// Blocks until stop() is called from another thread.
    void wait();

    std::uint16_t port() const;

    /// Handles one request for the given connection role; exposed for tests
    /// that exercise the state machine without sockets. `role` is updated by HELLO.
    nlohmann::json handle(const nlohmann::json& request, std::string& role, std::string& session_id);

private:
    void accept_loop();
    void serve_connection(Socket sock);
    void relay_to_receiver(Socket& sock, const std::string& session_id);
    std::shared_ptr<Session> find(const std::string& id);
    std::shared_ptr<Session> open_session(const std::string& requested_id);
    void note(const std::string& line);

    ServiceConfig config_;
    std::unique_ptr<Listener> listener_;
    std::atomic<bool> running_{false};
    std::thread accept_thread_;

    std::mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t next_session_ = 0;

    std::mutex connections_mutex_;
    std::vector<std::thread> connection_threads_;
    std::vector<int> connection_fds_;

    std::mutex log_mutex_;
    std::mutex stop_mutex_;
    std::condition_variable stop_cv_;
};

}  // namespace teleportlab::net
