#include "skirmish/net.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/un.h>
#include <fcntl.h>
#include <unistd.h>

#include <filesystem>

namespace skirmish {

namespace {

std::string errno_text(const std::string& what) {
  return what + ": " + std::strerror(errno);
}

sockaddr_un local_address(const std::string& path) {
  sockaddr_un addr{};
  addr.sun_family = AF_UNIX;
  if (path.size() >= sizeof(addr.sun_path)) throw NetError("socket path too long: " + path);
  std::memcpy(addr.sun_path, path.c_str(), path.size() + 1);
  return addr;
}

sockaddr_in tcp_address(const Endpoint& ep) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(ep.port);
  if (ep.host.empty() || ep.host == "*" || ep.host == "0.0.0.0") {
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    return addr;
  }
  if (inet_pton(AF_INET, ep.host.c_str(), &addr.sin_addr) == 1) return addr;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (getaddrinfo(ep.host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr) {
    throw NetError("cannot resolve host " + ep.host);
  }
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  freeaddrinfo(res);
  return addr;
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

} // namespace

Endpoint Endpoint::tcp(std::string host, std::uint16_t port) {
  Endpoint ep;
  ep.kind = Kind::Tcp;
  ep.host = std::move(host);
  ep.port = port;
  return ep;
}

Endpoint Endpoint::local(std::string path) {
  Endpoint ep;
  ep.kind = Kind::Local;
  ep.path = std::move(path);
  return ep;
}

Endpoint Endpoint::parse(const std::string& text) {
  if (text.starts_with("unix:")) return local(text.substr(5));
  std::string rest = text;
  if (rest.starts_with("tcp://")) rest = rest.substr(6);
  else if (rest.find('/') != std::string::npos) return local(rest);
  const auto colon = rest.rfind(':');
  if (colon == std::string::npos) throw NetError("endpoint needs host:port, got '" + text + "'");
  const std::string port_text = rest.substr(colon + 1);
  char* end = nullptr;
  const long port = std::strtol(port_text.c_str(), &end, 10);
  if (port_text.empty() || *end != '\0' || port < 0 || port > 65535) {
    throw NetError("bad port in endpoint '" + text + "'");
  }
  return tcp(rest.substr(0, colon), static_cast<std::uint16_t>(port));
}

std::string Endpoint::to_string() const {
  if (kind == Kind::Local) return "unix:" + path;
  return host + ":" + std::to_string(port);
}

Connection::Connection(Connection&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), out_(std::move(other.out_)), in_pos_(other.in_pos_),
      in_len_(other.in_len_), sent_(other.sent_), received_(other.received_) {
  std::memcpy(in_, other.in_, in_len_);
}

Connection& Connection::operator=(Connection&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
    out_ = std::move(other.out_);
    in_pos_ = other.in_pos_;
    in_len_ = other.in_len_;
    std::memcpy(in_, other.in_, in_len_);
    sent_ = other.sent_;
    received_ = other.received_;
  }
  return *this;
}

Connection::~Connection() { close(); }

Connection Connection::open(const Endpoint& endpoint) {
  int fd = -1;
  if (endpoint.kind == Endpoint::Kind::Local) {
    const auto addr = local_address(endpoint.path);
    fd = ::socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
    if (fd < 0) throw NetError(errno_text("socket"));
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
      const auto msg = errno_text("connect to " + endpoint.to_string());
      ::close(fd);
      throw NetError(msg);
    }
  } else {
    const auto addr = tcp_address(endpoint);
    fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
    if (fd < 0) throw NetError(errno_text("socket"));
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
      const auto msg = errno_text("connect to " + endpoint.to_string());
      ::close(fd);
      throw NetError(msg);
    }
    set_nodelay(fd);
  }
  return Connection(fd);
}

void Connection::send_payload(std::span<const std::uint8_t> payload) {
  if (fd_ < 0) throw NetError("send on closed connection");
  out_.clear();
  append_framed(payload, out_);
  std::size_t done = 0;
  while (done < out_.size()) {
    const ssize_t n = ::send(fd_, out_.data() + done, out_.size() - done, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw NetError(errno_text("send"));
    }
    done += static_cast<std::size_t>(n);
  }
  ++sent_;
}

void Connection::send(const Message& msg) {
  const Bytes payload = encode_message(msg);
  send_payload(payload);
}

bool Connection::fill() {
  if (fd_ < 0) throw NetError("receive on closed connection");
  for (;;) {
    const ssize_t n = ::recv(fd_, in_, sizeof(in_), 0);
    if (n > 0) {
      in_pos_ = 0;
      in_len_ = static_cast<std::size_t>(n);
      return true;
    }
    if (n == 0) return false;
    if (errno == EINTR) continue;
    if (errno == EAGAIN || errno == EWOULDBLOCK) throw TimeoutError("receive timed out");
    if (errno == ECONNRESET) return false;
    throw NetError(errno_text("recv"));
  }
}

std::size_t Connection::read_some(std::span<std::uint8_t> into) {
  if (in_pos_ == in_len_ && !fill()) return 0;
  const std::size_t n = std::min(into.size(), in_len_ - in_pos_);
  std::memcpy(into.data(), in_ + in_pos_, n);
  in_pos_ += n;
  return n;
}

std::optional<Bytes> Connection::try_receive_payload() {
  auto payload = try_read_framed(*this);
  if (payload) ++received_;
  return payload;
}

Bytes Connection::receive_payload() {
  auto payload = try_receive_payload();
  if (!payload) throw NetError("connection closed by peer");
  return std::move(*payload);
}

Message Connection::receive() { return decode_message(receive_payload()); }

void Connection::set_receive_timeout(std::chrono::milliseconds timeout) {
  if (fd_ < 0) return;
  timeval tv{};
  if (timeout.count() > 0) {
    tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
    tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
  }
  ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
}

void Connection::shutdown() noexcept {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void Connection::close() noexcept {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

Listener::Listener(const Endpoint& endpoint) : endpoint_(endpoint) {
  if (endpoint.kind == Endpoint::Kind::Local) {
    const auto addr = local_address(endpoint.path);
    fd_ = ::socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
    if (fd_ < 0) throw NetError(errno_text("socket"));
    std::error_code ec;
    if (std::filesystem::is_socket(endpoint.path, ec)) {
      // Only replace the file if nobody is listening on it.
      int probe = ::socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
      const bool live = ::connect(probe, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) == 0;
      ::close(probe);
      if (live) {
        ::close(fd_);
        throw NetError("endpoint " + endpoint.to_string() + " already in use");
      }
      std::filesystem::remove(endpoint.path, ec);
    }
    if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
      const auto msg = errno_text("bind " + endpoint.to_string());
      ::close(fd_);
      throw NetError(msg);
    }
    unlink_on_close_ = true;
  } else {
    const auto addr = tcp_address(endpoint);
    fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
    if (fd_ < 0) throw NetError(errno_text("socket"));
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
      const auto msg = errno_text("bind " + endpoint.to_string());
      ::close(fd_);
      throw NetError(msg);
    }
    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    endpoint_.port = ntohs(bound.sin_port);
  }
  if (::listen(fd_, 16) != 0) {
    const auto msg = errno_text("listen");
    ::close(fd_);
    throw NetError(msg);
  }
  open_wake_pipe();
}

void Listener::open_wake_pipe() {
  if (::pipe2(wake_, O_CLOEXEC | O_NONBLOCK) != 0) {
    const auto msg = errno_text("pipe");
    ::close(fd_);
    throw NetError(msg);
  }
}

Listener::Listener(Listener&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), wake_{std::exchange(other.wake_[0], -1),
                                             std::exchange(other.wake_[1], -1)},
      endpoint_(std::move(other.endpoint_)),
      unlink_on_close_(std::exchange(other.unlink_on_close_, false)) {}

Listener& Listener::operator=(Listener&& other) noexcept {
  if (this != &other) {
    this->~Listener();
    fd_ = std::exchange(other.fd_, -1);
    wake_[0] = std::exchange(other.wake_[0], -1);
    wake_[1] = std::exchange(other.wake_[1], -1);
    endpoint_ = std::move(other.endpoint_);
    unlink_on_close_ = std::exchange(other.unlink_on_close_, false);
  }
  return *this;
}

Listener::~Listener() {
  for (int* fd : {&fd_, &wake_[0], &wake_[1]}) {
    if (*fd >= 0) {
      ::close(*fd);
      *fd = -1;
    }
  }
  if (unlink_on_close_) {
    std::error_code ec;
    std::filesystem::remove(endpoint_.path, ec);
    unlink_on_close_ = false;
  }
}

std::optional<Connection> Listener::accept() {
  for (;;) {
    pollfd fds[2] = {{fd_, POLLIN, 0}, {wake_[0], POLLIN, 0}};
    if (::poll(fds, 2, -1) < 0) {
      if (errno == EINTR) continue;
      return std::nullopt;
    }
    if (fds[1].revents != 0) return std::nullopt;
    if ((fds[0].revents & POLLIN) == 0) return std::nullopt;
    const int fd = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd >= 0) {
      if (endpoint_.kind == Endpoint::Kind::Tcp) set_nodelay(fd);
      return Connection(fd);
    }
    if (errno == EINTR || errno == ECONNABORTED || errno == EAGAIN) continue;
    return std::nullopt;
  }
}

void Listener::shutdown() noexcept {
  if (wake_[1] >= 0) {
    const char byte = 1;
    [[maybe_unused]] auto n = ::write(wake_[1], &byte, 1);
  }
}

} // namespace skirmish
