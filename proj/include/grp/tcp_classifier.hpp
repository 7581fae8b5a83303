#pragma once

#include "grp/classifier.hpp"

#include <chrono>
#include <cstdint>
#include <string>

namespace grp {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;

  /// Parses "host:port".
  static Endpoint parse(const std::string& text);
};

inline constexpr std::chrono::milliseconds kDefaultClassifierTimeout{ 2000 };
inline constexpr int kDefaultRemoteInput = 224;

/// Client for an external classifier speaking newline-delimited JSON over
/// TCP:
///
///   -> {"op":"labels"}
///   <- {"op":"labels","labels":[...]}
///   -> {"op":"classify","id":N,"width":W,"height":H,"rgb8_b64":"..."}
///   <- {"op":"result","id":N,"label":"...","probs":{"<label>":p,...}}
///
/// Requests on one connection are serialized. Any protocol violation or
/// timeout closes the connection; the next call reconnects and repeats the
/// label handshake.
class TcpClassifier final : public Classifier {
public:
  explicit TcpClassifier(Endpoint endpoint, int input_size = kDefaultRemoteInput,
                         std::chrono::milliseconds timeout = kDefaultClassifierTimeout);
  ~TcpClassifier() override;

  TcpClassifier(const TcpClassifier&) = delete;
  TcpClassifier& operator=(const TcpClassifier&) = delete;

  const std::vector<std::string>& labels() const override { return labels_; }
  int input_width() const override { return input_size_; }
  int input_height() const override { return input_size_; }
  ClassScores classify(const Patch& patch) override;

private:
  void ensure_connected();
  void disconnect() noexcept;
  void send_line(const std::string& line, std::chrono::steady_clock::time_point deadline);
  std::string read_line(std::chrono::steady_clock::time_point deadline);

  Endpoint endpoint_;
  int input_size_;
  std::chrono::milliseconds timeout_;
  int fd_ = -1;
  std::string buffer_;
  std::uint64_t next_id_ = 1;
  std::vector<std::string> labels_;
};

} // namespace grp
