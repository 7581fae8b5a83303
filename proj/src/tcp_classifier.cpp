#include "grp/tcp_classifier.hpp"

#include "grp/base64.hpp"
#include "grp/error.hpp"
#include "grp/text.hpp"

#include <json.hpp>

#include <cerrno>
#include <cstring>
#include <set>

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

namespace grp {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

constexpr std::size_t kMaxLine = std::size_t{ 64 } << 20;

int
remaining_ms(Clock::time_point deadline)
{
  const auto left =
    std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
  return left > 0 ? static_cast<int>(left) : 0;
}

json
parse_reply(const std::string& line)
{
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ProtocolError, std::string("unparseable reply: ") + e.what());
  }
  if (!j.is_object() || !j.contains("op") || !j["op"].is_string()) {
    throw Error(ErrorCode::ProtocolError, "reply is not an object with an op");
  }
  if (j["op"] == "error") {
    throw Error(ErrorCode::ProtocolError,
                "service error: " + (j.contains("msg") ? j["msg"].dump() : std::string("?")));
  }
  return j;
}

} // namespace

Endpoint
Endpoint::parse(const std::string& text)
{
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw Error(ErrorCode::InvalidConfig, "endpoint must be host:port, got '" + text + "'");
  }
  Endpoint ep;
  ep.host = text.substr(0, colon);
  std::size_t port = 0;
  try {
    port = parse_size(text.substr(colon + 1), "port");
  } catch (const Error&) {
    throw Error(ErrorCode::InvalidConfig, "bad port in '" + text + "'");
  }
  if (port == 0 || port > 65535) {
    throw Error(ErrorCode::InvalidConfig, "port out of range in '" + text + "'");
  }
  ep.port = static_cast<std::uint16_t>(port);
  return ep;
}

TcpClassifier::TcpClassifier(Endpoint endpoint, int input_size, std::chrono::milliseconds timeout)
  : endpoint_(std::move(endpoint))
  , input_size_(input_size)
  , timeout_(timeout)
{
  if (input_size_ < 1) throw Error(ErrorCode::InvalidConfig, "input size must be >= 1");
  ensure_connected();
}

TcpClassifier::~TcpClassifier()
{
  disconnect();
}

void
TcpClassifier::disconnect() noexcept
{
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
  buffer_.clear();
}

void
TcpClassifier::ensure_connected()
{
  if (fd_ >= 0) return;
  const auto deadline = Clock::now() + timeout_;

  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const auto port = std::to_string(endpoint_.port);
  if (::getaddrinfo(endpoint_.host.c_str(), port.c_str(), &hints, &res) != 0 || !res) {
    throw Error(ErrorCode::IoFailure, "cannot resolve " + endpoint_.host);
  }
  int fd = -1;
  std::string last_error = "no address";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK);
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    if (errno == EINPROGRESS) {
      pollfd p{ fd, POLLOUT, 0 };
      if (::poll(&p, 1, remaining_ms(deadline)) == 1) {
        int err = 0;
        socklen_t len = sizeof err;
        ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
        if (err == 0) break;
        last_error = std::strerror(err);
      } else {
        last_error = "connect timed out";
      }
    } else {
      last_error = std::strerror(errno);
    }
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    throw Error(ErrorCode::IoFailure, "cannot connect to " + endpoint_.host + ":" + port +
                                        " (" + last_error + ")");
  }
  fd_ = fd;

  try {
    send_line(R"({"op":"labels"})", deadline);
    const json reply = parse_reply(read_line(deadline));
    if (reply["op"] != "labels" || !reply.contains("labels") || !reply["labels"].is_array()) {
      throw Error(ErrorCode::ProtocolError, "bad labels handshake reply");
    }
    std::vector<std::string> labels;
    for (const auto& l : reply["labels"]) {
      if (!l.is_string()) throw Error(ErrorCode::ProtocolError, "non-string label");
      labels.push_back(l.get<std::string>());
    }
    if (labels.size() < 2 || std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
      throw Error(ErrorCode::ProtocolError, "label list must hold >= 2 distinct labels");
    }
    if (!labels_.empty() && labels != labels_) {
      throw Error(ErrorCode::ProtocolError, "service label set changed between connections");
    }
    labels_ = std::move(labels);
  } catch (...) {
    disconnect();
    throw;
  }
}

void
TcpClassifier::send_line(const std::string& line, Clock::time_point deadline)
{
  std::string data = line;
  data += '\n';
  std::size_t sent = 0;
  while (sent < data.size()) {
    const auto n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n > 0) {
      sent += static_cast<std::size_t>(n);
      continue;
    }
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR)) {
      pollfd p{ fd_, POLLOUT, 0 };
      if (::poll(&p, 1, remaining_ms(deadline)) != 1) {
        throw Error(ErrorCode::Timeout, "timed out sending request");
      }
      continue;
    }
    throw Error(ErrorCode::IoFailure, std::string("send failed: ") + std::strerror(errno));
  }
}

std::string
TcpClassifier::read_line(Clock::time_point deadline)
{
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (buffer_.size() > kMaxLine) {
      throw Error(ErrorCode::ProtocolError, "reply line too long");
    }
    pollfd p{ fd_, POLLIN, 0 };
    const int ready = ::poll(&p, 1, remaining_ms(deadline));
    if (ready == 0) throw Error(ErrorCode::Timeout, "no reply within the timeout");
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::IoFailure, std::string("poll failed: ") + std::strerror(errno));
    }
    char chunk[65536];
    const auto n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n == 0) throw Error(ErrorCode::ProtocolError, "service closed the connection");
    if (n < 0) {
      if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) continue;
      throw Error(ErrorCode::IoFailure, std::string("recv failed: ") + std::strerror(errno));
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

ClassScores
TcpClassifier::classify(const Patch& patch)
{
  if (patch.image.width != input_size_ || patch.image.height != input_size_) {
    throw Error(ErrorCode::ShapeMismatch, "patch does not match the remote input size");
  }
  ensure_connected();
  const auto deadline = Clock::now() + timeout_;
  const std::uint64_t id = next_id_++;
  try {
    json req;
    req["op"] = "classify";
    req["id"] = id;
    req["width"] = patch.image.width;
    req["height"] = patch.image.height;
    req["rgb8_b64"] = base64_encode(patch.image.pixels);
    send_line(req.dump(), deadline);

    const json reply = parse_reply(read_line(deadline));
    if (reply["op"] != "result") {
      throw Error(ErrorCode::ProtocolError, "expected a result reply");
    }
    if (!reply.contains("id") || !reply["id"].is_number_unsigned() ||
        reply["id"].get<std::uint64_t>() != id) {
      throw Error(ErrorCode::ProtocolError, "reply id does not echo the request id");
    }
    if (!reply.contains("probs") || !reply["probs"].is_object()) {
      throw Error(ErrorCode::ProtocolError, "reply lacks a probs object");
    }
    ClassScores scores;
    for (const auto& [label, p] : reply["probs"].items()) {
      if (!p.is_number()) throw Error(ErrorCode::ProtocolError, "non-numeric probability");
      scores.probs[label] = p.get<double>();
    }
    scores.validate(labels_);
    if (!reply.contains("label") || !reply["label"].is_string() ||
        !scores.probs.contains(reply["label"].get<std::string>())) {
      throw Error(ErrorCode::ProtocolError, "reply label is not in the label set");
    }
    return scores;
  } catch (const Error&) {
    disconnect();
    throw;
  }
}

} // namespace grp
