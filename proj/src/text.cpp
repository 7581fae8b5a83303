#include "grp/text.hpp"

#include "grp/error.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace grp {

std::string
format_double(double v)
{
  std::array<char, 32> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), p);
}

double
parse_double(std::string_view token, std::string_view what)
{
  token = trim(token);
  double v = 0.0;
  const auto* end = token.data() + token.size();
  auto [p, ec] = std::from_chars(token.data(), end, v);
  if (ec == std::errc() && p == end) return v;
  // from_chars rejects "nan"/"inf" spellings with a sign or case variants
  if (token == "nan" || token == "NaN" || token == "-nan") return std::nan("");
  throw Error(ErrorCode::MalformedHeader,
              std::string(what) + ": not a number: '" + std::string(token) + "'");
}

std::size_t
parse_size(std::string_view token, std::string_view what)
{
  token = trim(token);
  std::size_t v = 0;
  const auto* end = token.data() + token.size();
  auto [p, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || p != end) {
    throw Error(ErrorCode::MalformedHeader,
                std::string(what) + ": not a non-negative integer: '" + std::string(token) + "'");
  }
  return v;
}

long long
parse_int(std::string_view token, std::string_view what)
{
  token = trim(token);
  long long v = 0;
  const auto* end = token.data() + token.size();
  auto [p, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || p != end) {
    throw Error(ErrorCode::MalformedHeader,
                std::string(what) + ": not an integer: '" + std::string(token) + "'");
  }
  return v;
}

std::string_view
trim(std::string_view s) noexcept
{
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string>
split(std::string_view s, char sep)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

} // namespace grp
