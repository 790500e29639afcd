// Minimal scripted TCP client for exercising the telemetry server in tests.
#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsa::testwire {

class Client {
public:
    Client(const std::string& host, std::uint16_t port) {
        fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd_ < 0) throw std::runtime_error("client socket failed");
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(port);
        if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
            throw std::runtime_error("bad host " + host);
        if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
            throw std::runtime_error("connect failed");
    }

    ~Client() {
        if (fd_ >= 0) ::close(fd_);
    }

    Client(const Client&) = delete;
    Client& operator=(const Client&) = delete;

    void send_line(const std::string& line) {
        const std::string payload = line + "\n";
        std::size_t sent = 0;
        while (sent < payload.size()) {
            const ssize_t n =
                ::send(fd_, payload.data() + sent, payload.size() - sent, MSG_NOSIGNAL);
            if (n <= 0) throw std::runtime_error("send failed");
            sent += static_cast<std::size_t>(n);
        }
    }

    // Reads one newline-terminated line (blocking). Empty return = peer closed.
    std::string read_line() {
        std::string line;
        while (true) {
            const auto pos = buffer_.find('\n');
            if (pos != std::string::npos) {
                line = buffer_.substr(0, pos);
                buffer_.erase(0, pos + 1);
                return line;
            }
            char chunk[1024];
            const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
            if (n <= 0) return {};
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

    // Drains lines until the connection closes.
    std::vector<std::string> read_until_close() {
        std::vector<std::string> lines;
        while (true) {
            std::string line = read_line();
            if (line.empty()) break;
            lines.push_back(std::move(line));
        }
        return lines;
    }

private:
    int fd_ = -1;
    std::string buffer_;
};

}  // namespace dsa::testwire
