// server.hpp — TCP front end for the telemetry protocol.
//
// One connection = one session = one SessionEngine, handled on its own
// thread; sessions share nothing mutable. Completed sessions are appended
// to the log directory as canonical SessionLog files.

#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "dsa/types.hpp"

namespace dsa {

struct ServerConfig {
    std::string bind_address = "127.0.0.1:7070";  // host:port, port 0 = ephemeral
    std::string log_dir = "dsa-logs";             // empty disables log files
    SessionConfig session_defaults;
};

// Splits "host:port"; throws Error(BindFailure) on an unparsable address.
std::pair<std::string, std::uint16_t> parse_bind_address(const std::string& address);

class TelemetryServer {
public:
    explicit TelemetryServer(ServerConfig config);
    ~TelemetryServer();

    TelemetryServer(const TelemetryServer&) = delete;
    TelemetryServer& operator=(const TelemetryServer&) = delete;

    // Binds and starts accepting. Throws Error(BindFailure).
    void start();

    // Stops accepting, closes live connections, joins all threads.
    void stop();

    // Actual bound port (useful when configured with port 0).
    std::uint16_t port() const { return port_; }

private:
    void accept_loop();
    void handle_connection(int fd);
    void write_session_log(const SessionLog& log, const std::string& session_id);

    ServerConfig config_;
    std::atomic<int> listen_fd_{-1};
    std::uint16_t port_ = 0;
    std::atomic<bool> running_{false};
    std::atomic<std::uint64_t> next_session_{0};
    std::thread accept_thread_;
    std::mutex mutex_;  // guards workers_ and client_fds_
    std::vector<std::thread> workers_;
    std::vector<int> client_fds_;
};

}  // namespace dsa
