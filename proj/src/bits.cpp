#include "molsec/bits.hpp"

#include "molsec/errors.hpp"

namespace molsec {

BitVector parse_bits(std::string_view text) {
    BitVector bits;
    bits.reserve(text.size());
    for (char ch : text) {
        switch (ch) {
        case '0': bits.push_back(0); break;
        case '1': bits.push_back(1); break;
        case ' ':
        case '_': break;
        default:
            throw ConfigError(std::string("invalid bit character '") + ch + "' in \"" + std::string(text) + "\"");
        }
    }
    return bits;
}

std::string to_string(BitSpan bits) {
    std::string out;
    out.reserve(bits.size());
    for (Bit b : bits)
        out.push_back(b ? '1' : '0');
    return out;
}

} // namespace molsec
