#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace molsec {

// A single information bit, always 0 or 1.
using Bit = std::uint8_t;
using BitVector = std::vector<Bit>;
using BitSpan = std::span<const Bit>;

// Parses a string of '0'/'1' characters. Spaces and underscores are skipped
// so that "1011 0101" and "1011_0101" are accepted.
BitVector parse_bits(std::string_view text);

std::string to_string(BitSpan bits);

} // namespace molsec
