#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "relzkp/errors.hpp"

namespace relzkp {

inline double monotonic_ns() {
    return static_cast<double>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now().time_since_epoch())
            .count());
}

// Blocking TCP link carrying length-prefixed frames (u32 LE length, then the
// frame payload from wire.hpp). Receive timestamps come from the local
// monotonic clock; a single host cannot enforce relativistic separation, so
// this mode is for wire-format and integration testing only.
class TcpTransport {
public:
    static constexpr std::uint32_t kMaxFrameBytes = 16u << 20;

    TcpTransport(const TcpTransport&) = delete;
    TcpTransport& operator=(const TcpTransport&) = delete;
    TcpTransport(TcpTransport&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
    TcpTransport& operator=(TcpTransport&& other) noexcept {
        if (this != &other) {
            close_fd();
            fd_ = other.fd_;
            other.fd_ = -1;
        }
        return *this;
    }
    ~TcpTransport() { close_fd(); }

    static TcpTransport connect(const std::string& host, std::uint16_t port) {
        int fd = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd < 0) throw TransportError("socket() failed");
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(port);
        if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
            ::close(fd);
            throw TransportError("bad address: " + host);
        }
        if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
            ::close(fd);
            throw TransportError("connect() failed");
        }
        return TcpTransport(fd);
    }

    class Listener {
    public:
        explicit Listener(std::uint16_t port) {
            fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
            if (fd_ < 0) throw TransportError("socket() failed");
            int yes = 1;
            ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
            sockaddr_in addr{};
            addr.sin_family = AF_INET;
            addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
            addr.sin_port = htons(port);
            if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 || ::listen(fd_, 1) != 0) {
                ::close(fd_);
                throw TransportError("bind/listen failed");
            }
            socklen_t len = sizeof(addr);
            ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
            port_ = ntohs(addr.sin_port);
        }
        Listener(const Listener&) = delete;
        Listener(Listener&& o) noexcept : fd_(o.fd_), port_(o.port_) { o.fd_ = -1; }
        ~Listener() {
            if (fd_ >= 0) ::close(fd_);
        }

        std::uint16_t port() const { return port_; }

        TcpTransport accept() {
            int fd = ::accept(fd_, nullptr, nullptr);
            if (fd < 0) throw TransportError("accept() failed");
            return TcpTransport(fd);
        }

    private:
        int fd_ = -1;
        std::uint16_t port_ = 0;
    };

    static Listener listen(std::uint16_t port) { return Listener(port); }

    void send_frame(const std::vector<std::uint8_t>& payload) {
        if (payload.size() > kMaxFrameBytes) throw FrameError("frame exceeds size cap");
        std::uint8_t prefix[4];
        const std::uint32_t len = static_cast<std::uint32_t>(payload.size());
        for (int i = 0; i < 4; ++i) prefix[i] = static_cast<std::uint8_t>(len >> (8 * i));
        write_all(prefix, 4);
        write_all(payload.data(), payload.size());
    }

    struct Received {
        std::vector<std::uint8_t> payload;
        double recv_time_ns = 0;
    };

    Received recv_frame() {
        std::uint8_t prefix[4];
        read_all(prefix, 4);
        std::uint32_t len = 0;
        for (int i = 0; i < 4; ++i) len |= static_cast<std::uint32_t>(prefix[i]) << (8 * i);
        if (len > kMaxFrameBytes) throw FrameError("incoming frame exceeds size cap");
        Received r;
        r.payload.resize(len);
        read_all(r.payload.data(), len);
        r.recv_time_ns = monotonic_ns();
        return r;
    }

private:
    explicit TcpTransport(int fd) : fd_(fd) {
        int yes = 1;
        ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &yes, sizeof(yes));
    }

    void write_all(const std::uint8_t* data, std::size_t len) {
        while (len > 0) {
            ssize_t n = ::send(fd_, data, len, MSG_NOSIGNAL);
            if (n <= 0) throw TransportError("connection lost during send");
            data += n;
            len -= static_cast<std::size_t>(n);
        }
    }

    void read_all(std::uint8_t* data, std::size_t len) {
        while (len > 0) {
            ssize_t n = ::recv(fd_, data, len, 0);
            if (n <= 0) throw TransportError("connection lost during recv");
            data += n;
            len -= static_cast<std::size_t>(n);
        }
    }

    void close_fd() {
        if (fd_ >= 0) {
            ::close(fd_);
            fd_ = -1;
        }
    }

    int fd_ = -1;
};

}  // namespace relzkp
