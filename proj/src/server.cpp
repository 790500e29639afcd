#include "dsa/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <iostream>

#include "dsa/codec.hpp"
#include "dsa/telemetry.hpp"

namespace dsa {

namespace {

// Blocking line-oriented writer; returns false once the peer is gone.
bool send_all(int fd, std::string_view data) {
    std::size_t sent = 0;
    while (sent < data.size()) {
        const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) return false;
        sent += static_cast<std::size_t>(n);
    }
    return true;
}

}  // namespace

std::pair<std::string, std::uint16_t> parse_bind_address(const std::string& address) {
    const auto colon = address.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= address.size())
        throw Error(Errc::BindFailure, "bind address must be host:port, got \"" + address + "\"");
    const std::string host = address.substr(0, colon);
    const std::string port_text = address.substr(colon + 1);
    char* end = nullptr;
    const long port = std::strtol(port_text.c_str(), &end, 10);
    if (end == port_text.c_str() || *end != '\0' || port < 0 || port > 65535)
        throw Error(Errc::BindFailure, "invalid port \"" + port_text + "\"");
    return {host, static_cast<std::uint16_t>(port)};
}

TelemetryServer::TelemetryServer(ServerConfig config) : config_(std::move(config)) {}

TelemetryServer::~TelemetryServer() { stop(); }

void TelemetryServer::start() {
    const auto [host, port] = parse_bind_address(config_.bind_address);

    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0)
        throw Error(Errc::BindFailure, std::string("socket: ") + std::strerror(errno));

    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        throw Error(Errc::BindFailure, "cannot parse host \"" + host + "\"");
    }
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        const std::string detail = std::strerror(errno);
        ::close(fd);
        throw Error(Errc::BindFailure, "bind " + config_.bind_address + ": " + detail);
    }
    if (::listen(fd, 16) != 0) {
        const std::string detail = std::strerror(errno);
        ::close(fd);
        throw Error(Errc::BindFailure, "listen: " + detail);
    }

    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
    listen_fd_ = fd;

    if (!config_.log_dir.empty())
        std::filesystem::create_directories(config_.log_dir);

    running_ = true;
    accept_thread_ = std::thread([this] { accept_loop(); });
}

void TelemetryServer::stop() {
    if (!running_.exchange(false)) {
        if (accept_thread_.joinable()) accept_thread_.join();
        return;
    }
    if (const int fd = listen_fd_.exchange(-1); fd >= 0) {
        ::shutdown(fd, SHUT_RDWR);
        ::close(fd);
    }
    {
        std::lock_guard lock(mutex_);
        for (int fd : client_fds_) ::shutdown(fd, SHUT_RDWR);
    }
    if (accept_thread_.joinable()) accept_thread_.join();
    std::vector<std::thread> workers;
    {
        std::lock_guard lock(mutex_);
        workers.swap(workers_);
    }
    for (std::thread& t : workers)
        if (t.joinable()) t.join();
}

void TelemetryServer::accept_loop() {
    while (running_) {
        const int listener = listen_fd_.load();
        if (listener < 0) break;
        const int fd = ::accept(listener, nullptr, nullptr);
        if (fd < 0) {
            if (!running_) break;
            continue;
        }
        std::lock_guard lock(mutex_);
        client_fds_.push_back(fd);
        workers_.emplace_back([this, fd] { handle_connection(fd); });
    }
}

void TelemetryServer::handle_connection(int fd) {
    const std::uint64_t session_number = next_session_.fetch_add(1);
    char id_buf[32];
    std::snprintf(id_buf, sizeof(id_buf), "s%06llu",
                  static_cast<unsigned long long>(session_number));
    SessionEngine engine(config_.session_defaults, id_buf);

    std::string buffer;
    char chunk[4096];
    bool open = true;
    while (open && running_) {
        const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
        if (n <= 0) break;
        buffer.append(chunk, static_cast<std::size_t>(n));

        std::size_t pos;
        while (open && (pos = buffer.find('\n')) != std::string::npos) {
            std::string line = buffer.substr(0, pos);
            buffer.erase(0, pos + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;

            for (const WireMessage& reply : engine.handle_line(line)) {
                if (!send_all(fd, reply.encode() + "\n")) {
                    open = false;
                    break;
                }
            }
            if (engine.phase() == SessionEngine::Phase::Ended ||
                engine.phase() == SessionEngine::Phase::Aborted) {
                open = false;
            }
        }
    }

    if (engine.completed() && !config_.log_dir.empty())
        write_session_log(engine.log(), engine.session_id());

    ::close(fd);
    std::lock_guard lock(mutex_);
    client_fds_.erase(std::remove(client_fds_.begin(), client_fds_.end(), fd),
                      client_fds_.end());
}

void TelemetryServer::write_session_log(const SessionLog& log, const std::string& session_id) {
    try {
        const auto path =
            std::filesystem::path(config_.log_dir) / (session_id + ".jsonl");
        codec::write_file(path.string(), codec::encode(log));
    } catch (const std::exception& e) {
        std::cerr << "dsa-serve: failed to write session log: " << e.what() << '\n';
    }
}

}  // namespace dsa
