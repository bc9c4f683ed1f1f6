#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace entflow {

// Decimal text with up to 17 significant digits; round-trips every finite
// double bit-exactly through parse_double.
std::string format_g17(double v);

// Strict full-field parse (locale independent). Returns false on trailing
// garbage, empty input, or overflow; NaN/inf parse as themselves.
bool parse_double(std::string_view field, double& out);
bool parse_int(std::string_view field, long long& out);

// FNV-1a 64-bit, used to stamp output files with a config fingerprint.
std::uint64_t fnv1a64(std::string_view data);

std::string to_hex(std::uint64_t v);

}  // namespace entflow
