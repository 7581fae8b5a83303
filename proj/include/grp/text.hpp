#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace grp {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Strict parsers: the whole token must be consumed. Throw InvalidConfig
/// (or MalformedHeader for PCD callers, via the `what` prefix) on failure.
double parse_double(std::string_view token, std::string_view what);
std::size_t parse_size(std::string_view token, std::string_view what);
long long parse_int(std::string_view token, std::string_view what);

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string> split(std::string_view s, char sep);

} // namespace grp
