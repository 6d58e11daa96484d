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

#include "teleportlab/net/socket.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace teleportlab::net {

namespace {

std::string errno_text(const std::string& what) { return what + ": " + std::strerror(errno); }

int remaining_ms(std::chrono::steady_clock::time_point deadline) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    return left.count() < 0 ? 0 : static_cast<int>(left.count());
}

addrinfo* resolve(const Endpoint& ep, bool passive) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    if (passive) {
        hints.ai_flags = AI_PASSIVE;
    }
    addrinfo* res = nullptr;
    const auto port = std::to_string(ep.port);
    const char* host = ep.host.empty() ? nullptr : ep.host.c_str();
    if (const int rc = ::getaddrinfo(host, port.c_str(), &hints, &res); rc != 0) {
        throw ConnectionError("cannot resolve " + ep.host + ": " + ::gai_strerror(rc));
    }
    return res;
}

}  // namespace

Socket& Socket::operator=(Socket&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

void Socket::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

void Socket::shutdown() {
    if (fd_ >= 0) {
        ::shutdown(fd_, SHUT_RDWR);
    }
}

void Socket::send_message(const nlohmann::json& message) {
    const auto frame = encode_frame(message);
    std::size_t sent = 0;
    while (sent < frame.size()) {
        const auto n = ::send(fd_, frame.data() + sent, frame.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw ConnectionError(errno_text("send failed"));
        }
        sent += static_cast<std::size_t>(n);
    }
}

bool Socket::wait_readable(std::chrono::steady_clock::time_point deadline) {
    for (;;) {
        pollfd p{fd_, POLLIN, 0};
        const int rc = ::poll(&p, 1, remaining_ms(deadline));
        if (rc < 0 && errno == EINTR) {
            continue;
        }
        if (rc < 0) {
            throw ConnectionError(errno_text("poll failed"));
        }
        return rc > 0;
    }
}

void Socket::read_exact(char* out, std::size_t n, std::chrono::steady_clock::time_point deadline) {
    std::size_t got = 0;
    while (got < n) {
        if (!wait_readable(deadline)) {
            throw ConnectionError("timed out inside a frame");
        }
        const auto r = ::recv(fd_, out + got, n - got, 0);
        if (r == 0) {
            throw ConnectionError("connection closed");
        }
        if (r < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw ConnectionError(errno_text("recv failed"));
        }
        got += static_cast<std::size_t>(r);
    }
}

std::optional<nlohmann::json> Socket::receive_message(std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    if (!wait_readable(deadline)) {
        return std::nullopt;
    }
    // Once a frame has started, allow a little extra time for the rest of it.
    const auto frame_deadline = std::max(deadline, std::chrono::steady_clock::now() + std::chrono::seconds(5));
    char header[4];
    read_exact(header, sizeof header, frame_deadline);
    const auto len = decode_length({header, sizeof header});
    if (len > kMaxFrameBytes) {
        throw ProtocolError("frame of " + std::to_string(len) + " bytes exceeds the limit");
    }
    std::string body(len, '\0');
    read_exact(body.data(), len, frame_deadline);
    return decode_body(body);
}

Socket connect_to(const Endpoint& ep) {
    addrinfo* res = resolve(ep, false);
    Socket sock;
    std::string last_error = "no addresses";
    for (auto* ai = res; ai != nullptr; ai = ai->ai_next) {
        Socket candidate(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
        if (!candidate.valid()) {
            last_error = errno_text("socket failed");
            continue;
        }
        if (::connect(candidate.fd(), ai->ai_addr, ai->ai_addrlen) == 0) {
            int one = 1;
            ::setsockopt(candidate.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            sock = std::move(candidate);
            break;
        }
        last_error = errno_text("connect failed");
    }
    ::freeaddrinfo(res);
    if (!sock.valid()) {
        throw ConnectionError("cannot connect to " + ep.host + ":" + std::to_string(ep.port) + ": " + last_error);
    }
    return sock;
}

Listener::Listener(const Endpoint& ep) {
    addrinfo* res = resolve(ep, true);
    std::string last_error = "no addresses";
    for (auto* ai = res; ai != nullptr; ai = ai->ai_next) {
        Socket candidate(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
        if (!candidate.valid()) {
            last_error = errno_text("socket failed");
            continue;
        }
        int one = 1;
        ::setsockopt(candidate.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        if (::bind(candidate.fd(), ai->ai_addr, ai->ai_addrlen) != 0 || ::listen(candidate.fd(), 64) != 0) {
            last_error = errno_text("bind/listen failed");
            continue;
        }
        sockaddr_in bound{};
        socklen_t len = sizeof bound;
        ::getsockname(candidate.fd(), reinterpret_cast<sockaddr*>(&bound), &len);
        port_ = ntohs(bound.sin_port);
        sock_ = std::move(candidate);
        break;
    }
    ::freeaddrinfo(res);
    if (!sock_.valid()) {
        throw ConnectionError("cannot listen on " + ep.host + ":" + std::to_string(ep.port) + ": " + last_error);
    }
}

std::optional<Socket> Listener::accept(std::chrono::milliseconds timeout) {
    pollfd p{sock_.fd(), POLLIN, 0};
    const int rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
    if (rc <= 0) {
        return std::nullopt;
    }
    const int fd = ::accept(sock_.fd(), nullptr, nullptr);
    if (fd < 0) {
        return std::nullopt;
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return Socket(fd);
}

}  // namespace teleportlab::net
