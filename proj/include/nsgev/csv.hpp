#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nsgev::csv {

// Shortest round-trip decimal form; "NA" for NaN.
std::string format(double value);

std::vector<std::string> split(std::string_view line, char sep = ',');
std::string_view trim(std::string_view s);
bool is_missing_token(std::string_view s);
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

}  // namespace nsgev::csv
