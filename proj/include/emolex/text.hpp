#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace emolex::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Strict full-string parse; throws InputError naming `what` on failure.
double parse_double(std::string_view s, std::string_view what = "number");
long long parse_int(std::string_view s, std::string_view what = "integer");

// Shortest decimal that parses back to the identical double.
std::string format_double(double v);

std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t v);

}  // namespace emolex::text
