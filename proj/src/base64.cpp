#include "grp/base64.hpp"

#include "grp/error.hpp"

#include <array>

namespace grp {

namespace {

constexpr std::string_view kAlphabet =
  "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

constexpr std::array<int, 256>
make_decode_table()
{
  std::array<int, 256> t{};
  for (auto& v : t) v = -1;
  for (std::size_t k = 0; k < kAlphabet.size(); ++k) {
    t[static_cast<unsigned char>(kAlphabet[k])] = static_cast<int>(k);
  }
  return t;
}

constexpr auto kDecode = make_decode_table();

} // namespace

std::string
base64_encode(std::span<const std::uint8_t> bytes)
{
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t k = 0;
  for (; k + 3 <= bytes.size(); k += 3) {
    const std::uint32_t v = (std::uint32_t{ bytes[k] } << 16) |
                            (std::uint32_t{ bytes[k + 1] } << 8) | bytes[k + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const std::size_t rest = bytes.size() - k;
  if (rest == 1) {
    const std::uint32_t v = std::uint32_t{ bytes[k] } << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (rest == 2) {
    const std::uint32_t v = (std::uint32_t{ bytes[k] } << 16) | (std::uint32_t{ bytes[k + 1] } << 8);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t>
base64_decode(std::string_view text)
{
  if (text.size() % 4 != 0) {
    throw Error(ErrorCode::ProtocolError, "base64 length is not a multiple of 4");
  }
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t k = 0; k < text.size(); k += 4) {
    int vals[4];
    int pad = 0;
    for (int j = 0; j < 4; ++j) {
      const char c = text[k + j];
      if (c == '=') {
        // padding only in the final quad's last two slots
        if (k + 4 != text.size() || j < 2) {
          throw Error(ErrorCode::ProtocolError, "misplaced base64 padding");
        }
        vals[j] = 0;
        ++pad;
      } else {
        if (pad > 0) throw Error(ErrorCode::ProtocolError, "data after base64 padding");
        vals[j] = kDecode[static_cast<unsigned char>(c)];
        if (vals[j] < 0) throw Error(ErrorCode::ProtocolError, "invalid base64 character");
      }
    }
    const std::uint32_t v = (static_cast<std::uint32_t>(vals[0]) << 18) |
                            (static_cast<std::uint32_t>(vals[1]) << 12) |
                            (static_cast<std::uint32_t>(vals[2]) << 6) |
                            static_cast<std::uint32_t>(vals[3]);
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  }
  return out;
}

} // namespace grp
