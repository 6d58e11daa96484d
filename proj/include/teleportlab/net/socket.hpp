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

// Minimal blocking TCP sockets with framed-JSON I/O.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "teleportlab/net/wire.hpp"

namespace teleportlab::net {

/// Raised when a connection cannot be established or drops mid-frame.
class ConnectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    ~Socket() { close(); }

    Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
    Socket& operator=(Socket&& other) noexcept;
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;

    int fd() const { return fd_; }
    bool valid() const { return fd_ >= 0; }
    void close();
    /// Unblocks any thread reading from this socket.
    void shutdown();

    void send_message(const nlohmann::json& message);

    /// Next message, or nullopt on timeout. Throws ConnectionError on EOF or
    /// I/O failure and ProtocolError on an oversized or malformed frame.
    std::optional<nlohmann::json> receive_message(std::chrono::milliseconds timeout);

private:
    bool wait_readable(std::chrono::steady_clock::time_point deadline);
    void read_exact(char* out, std::size_t n, std::chrono::steady_clock::time_point deadline);

    int fd_ = -1;
};

Socket connect_to(const Endpoint& ep);

class Listener {
public:
    /// Binds and listens; port 0 picks a free port.
    explicit Listener(const Endpoint& ep);

    std::uint16_t port() const { return port_; }
    /// Waits up to `timeout` for a client; nullopt on timeout.
    std::optional<Socket> accept(std::chrono::milliseconds timeout);
    void close() { sock_.close(); }

private:
    Socket sock_;
    std::uint16_t port_ = 0;
};

}  // namespace teleportlab::net
