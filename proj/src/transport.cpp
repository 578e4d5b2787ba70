#include "pex/transport.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "pex/error.hpp"

namespace pex {

namespace {

std::string errno_text() { return std::strerror(errno); }

void set_nonblocking(int fd) {
  const int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

// Waits for `events` on `fd`. Returns false on timeout.
bool poll_fd(int fd, short events, std::chrono::milliseconds timeout) {
  pollfd pfd{fd, events, 0};
  while (true) {
    const int rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
    if (rc > 0) return true;
    if (rc == 0) return false;
    if (errno != EINTR) {
      throw Error(ErrorCode::kConnectionFailed, "poll: " + errno_text());
    }
  }
}

sockaddr_un unix_address(const std::string& path) {
  sockaddr_un addr{};
  addr.sun_family = AF_UNIX;
  if (path.size() >= sizeof(addr.sun_path)) {
    throw Error(ErrorCode::kInvalidArgument, "unix socket path too long");
  }
  std::memcpy(addr.sun_path, path.c_str(), path.size() + 1);
  return addr;
}

int connect_with_timeout(int fd, const sockaddr* addr, socklen_t len,
                         std::chrono::milliseconds timeout) {
  set_nonblocking(fd);
  if (::connect(fd, addr, len) == 0) return 0;
  if (errno != EINPROGRESS && errno != EAGAIN) return errno;
  if (!poll_fd(fd, POLLOUT, timeout)) return ETIMEDOUT;
  int err = 0;
  socklen_t err_len = sizeof(err);
  ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &err_len);
  return err;
}

}  // namespace

Endpoint Endpoint::parse(std::string_view spec) {
  Endpoint ep;
  constexpr std::string_view kTcp = "tcp://";
  constexpr std::string_view kUnix = "unix://";
  if (spec.starts_with(kUnix)) {
    ep.kind = Kind::kUnix;
    ep.path = std::string(spec.substr(kUnix.size()));
    if (ep.path.empty()) {
      throw Error(ErrorCode::kConfigError, "empty unix socket path");
    }
    return ep;
  }
  if (spec.starts_with(kTcp)) spec.remove_prefix(kTcp.size());
  const auto colon = spec.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw Error(ErrorCode::kConfigError,
                "endpoint must look like tcp://host:port or unix:///path");
  }
  ep.kind = Kind::kTcp;
  ep.host = std::string(spec.substr(0, colon));
  const auto port_text = spec.substr(colon + 1);
  const auto [ptr, ec] =
      std::from_chars(port_text.data(), port_text.data() + port_text.size(), ep.port);
  if (ec != std::errc{} || ptr != port_text.data() + port_text.size() ||
      ep.port < 0 || ep.port > 65535) {
    throw Error(ErrorCode::kConfigError, "bad port in endpoint");
  }
  return ep;
}

std::string Endpoint::to_string() const {
  if (kind == Kind::kUnix) return "unix://" + path;
  return "tcp://" + host + ":" + std::to_string(port);
}

void BufferSource::read_exact(std::span<std::uint8_t> out) {
  if (out.size() > remaining()) {
    pos_ = data_.size();
    throw Error(ErrorCode::kConnectionFailed, "unexpected end of buffer");
  }
  std::memcpy(out.data(), data_.data() + pos_, out.size());
  pos_ += out.size();
}

Connection Connection::connect(const Endpoint& endpoint,
                               std::chrono::milliseconds timeout) {
  if (endpoint.kind == Endpoint::Kind::kUnix) {
    const int fd = ::socket(AF_UNIX, SOCK_STREAM, 0);
    if (fd < 0) throw Error(ErrorCode::kConnectionFailed, "socket: " + errno_text());
    Connection conn(fd, timeout);
    const auto addr = unix_address(endpoint.path);
    if (const int err = connect_with_timeout(
            fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr), timeout)) {
      throw Error(err == ETIMEDOUT ? ErrorCode::kTimeout : ErrorCode::kConnectionFailed,
                  endpoint.to_string() + ": " + std::strerror(err));
    }
    return conn;
  }

  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* result = nullptr;
  const std::string port = std::to_string(endpoint.port);
  if (const int rc = ::getaddrinfo(endpoint.host.c_str(), port.c_str(), &hints, &result)) {
    throw Error(ErrorCode::kConnectionFailed,
                endpoint.to_string() + ": " + ::gai_strerror(rc));
  }
  std::string last_error = "no addresses";
  ErrorCode last_code = ErrorCode::kConnectionFailed;
  for (addrinfo* ai = result; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    Connection conn(fd, timeout);
    const int err = connect_with_timeout(fd, ai->ai_addr, ai->ai_addrlen, timeout);
    if (err == 0) {
      const int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      ::freeaddrinfo(result);
      return conn;
    }
    last_error = std::strerror(err);
    last_code = err == ETIMEDOUT ? ErrorCode::kTimeout : ErrorCode::kConnectionFailed;
  }
  ::freeaddrinfo(result);
  throw Error(last_code, endpoint.to_string() + ": " + last_error);
}

Connection::Connection(int fd, std::chrono::milliseconds timeout)
    : fd_(fd), timeout_(timeout) {
  set_nonblocking(fd_);
}

Connection::Connection(Connection&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), timeout_(other.timeout_) {}

Connection& Connection::operator=(Connection&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
    timeout_ = other.timeout_;
  }
  return *this;
}

Connection::~Connection() { close(); }

void Connection::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void Connection::wait(short events) {
  if (!poll_fd(fd_, events, timeout_)) {
    throw Error(ErrorCode::kTimeout, "no progress within " +
                                         std::to_string(timeout_.count()) + " ms");
  }
}

void Connection::write_all(std::span<const std::uint8_t> data) {
  if (fd_ < 0) throw Error(ErrorCode::kConnectionFailed, "connection closed");
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n > 0) {
      sent += static_cast<std::size_t>(n);
    } else if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
      wait(POLLOUT);
    } else if (n < 0 && errno == EINTR) {
      continue;
    } else {
      throw Error(ErrorCode::kConnectionFailed, "send: " + errno_text());
    }
  }
}

void Connection::read_exact(std::span<std::uint8_t> out) {
  if (fd_ < 0) throw Error(ErrorCode::kConnectionFailed, "connection closed");
  std::size_t got = 0;
  while (got < out.size()) {
    const ssize_t n = ::recv(fd_, out.data() + got, out.size() - got, 0);
    if (n > 0) {
      got += static_cast<std::size_t>(n);
    } else if (n == 0) {
      throw Error(ErrorCode::kConnectionFailed, "peer closed the connection");
    } else if (errno == EAGAIN || errno == EWOULDBLOCK) {
      wait(POLLIN);
    } else if (errno != EINTR) {
      throw Error(ErrorCode::kConnectionFailed, "recv: " + errno_text());
    }
  }
}

std::size_t Connection::read_some(std::span<std::uint8_t> out) {
  std::size_t got = 0;
  while (got < out.size()) {
    const ssize_t n = ::recv(fd_, out.data() + got, out.size() - got, 0);
    if (n > 0) {
      got += static_cast<std::size_t>(n);
    } else if (n == 0) {
      break;
    } else if (errno == EAGAIN || errno == EWOULDBLOCK) {
      if (!poll_fd(fd_, POLLIN, timeout_)) break;
    } else if (errno != EINTR) {
      break;
    }
  }
  return got;
}

void Connection::shutdown_write() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_WR);
}

Listener Listener::bind(const Endpoint& endpoint) {
  Endpoint bound = endpoint;
  int fd = -1;
  if (endpoint.kind == Endpoint::Kind::kUnix) {
    fd = ::socket(AF_UNIX, SOCK_STREAM, 0);
    if (fd < 0) throw Error(ErrorCode::kConnectionFailed, "socket: " + errno_text());
    ::unlink(endpoint.path.c_str());
    const auto addr = unix_address(endpoint.path);
    if (::bind(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
      const std::string why = errno_text();
      ::close(fd);
      throw Error(ErrorCode::kConnectionFailed, "bind " + endpoint.path + ": " + why);
    }
  } else {
    fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw Error(ErrorCode::kConnectionFailed, "socket: " + errno_text());
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(endpoint.port));
    if (::inet_pton(AF_INET, endpoint.host.c_str(), &addr.sin_addr) != 1) {
      ::close(fd);
      throw Error(ErrorCode::kConfigError, "listener host must be an IPv4 literal");
    }
    if (::bind(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
      const std::string why = errno_text();
      ::close(fd);
      throw Error(ErrorCode::kConnectionFailed, "bind: " + why);
    }
    socklen_t len = sizeof(addr);
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    bound.port = ntohs(addr.sin_port);
  }
  if (::listen(fd, 16) != 0) {
    const std::string why = errno_text();
    ::close(fd);
    throw Error(ErrorCode::kConnectionFailed, "listen: " + why);
  }
  return Listener(fd, bound);
}

Listener::Listener(Listener&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), endpoint_(std::move(other.endpoint_)) {}

Listener& Listener::operator=(Listener&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
    endpoint_ = std::move(other.endpoint_);
  }
  return *this;
}

Listener::~Listener() {
  if (fd_ >= 0) {
    ::close(fd_);
    if (endpoint_.kind == Endpoint::Kind::kUnix) ::unlink(endpoint_.path.c_str());
  }
}

Connection Listener::accept(std::chrono::milliseconds timeout) {
  if (!poll_fd(fd_, POLLIN, timeout)) {
    throw Error(ErrorCode::kTimeout, "no incoming connection");
  }
  const int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) throw Error(ErrorCode::kConnectionFailed, "accept: " + errno_text());
  return Connection(fd, timeout);
}

}  // namespace pex
