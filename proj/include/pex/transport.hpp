#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace pex {

// "tcp://host:port" or "unix:///path/to/socket".
struct Endpoint {
  enum class Kind { kTcp, kUnix };

  Kind kind = Kind::kTcp;
  std::string host = "127.0.0.1";
  int port = 0;
  std::string path;

  static Endpoint parse(std::string_view spec);
  std::string to_string() const;
};

// Blocking byte source with exact-length reads.
class ByteSource {
 public:
  virtual ~ByteSource() = default;
  // Fills `out` completely or throws (kConnectionFailed on EOF).
  virtual void read_exact(std::span<std::uint8_t> out) = 0;
};

// In-memory source, mostly for decoding captured frames.
class BufferSource final : public ByteSource {
 public:
  explicit BufferSource(std::span<const std::uint8_t> data) : data_(data) {}
  void read_exact(std::span<std::uint8_t> out) override;
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

// Owned stream socket. Every read and write is bounded by the timeout.
class Connection final : public ByteSource {
 public:
  static Connection connect(const Endpoint& endpoint,
                            std::chrono::milliseconds timeout);

  explicit Connection(int fd, std::chrono::milliseconds timeout);
  Connection(Connection&& other) noexcept;
  Connection& operator=(Connection&& other) noexcept;
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;
  ~Connection() override;

  void write_all(std::span<const std::uint8_t> data);
  void read_exact(std::span<std::uint8_t> out) override;
  // Reads whatever arrives until the peer closes or the timeout expires.
  std::size_t read_some(std::span<std::uint8_t> out);
  void shutdown_write();
  void close();

 private:
  void wait(short events);

  int fd_ = -1;
  std::chrono::milliseconds timeout_;
};

class Listener {
 public:
  // Port 0 on TCP binds an ephemeral port; endpoint() reports the real one.
  static Listener bind(const Endpoint& endpoint);

  Listener(Listener&& other) noexcept;
  Listener& operator=(Listener&& other) noexcept;
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;
  ~Listener();

  const Endpoint& endpoint() const { return endpoint_; }
  Connection accept(std::chrono::milliseconds timeout);

 private:
  Listener(int fd, Endpoint endpoint) : fd_(fd), endpoint_(std::move(endpoint)) {}

  int fd_ = -1;
  Endpoint endpoint_;
};

}  // namespace pex
