#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "molsec/bits.hpp"

// 8-bit parallel XOR cipher with serial/parallel framing.
namespace molsec::cipher {

inline constexpr std::size_t kBlockBits = 8;

struct BitBlock {
    std::array<Bit, kBlockBits> bits{};

    // Throws BlockAlignmentError unless exactly 8 bits are given.
    static BitBlock from_bits(BitSpan bits);

    bool operator==(const BitBlock&) const = default;
};

struct KeyBlock {
    std::array<Bit, kBlockBits> bits{};

    static KeyBlock from_bits(BitSpan bits);

    // Key block from an exchanged key of K bits: K must be a positive multiple
    // of 8 and only the first 8 bits are used.
    static KeyBlock from_exchanged_key(BitSpan key);

    bool operator==(const KeyBlock&) const = default;
};

std::vector<BitBlock> serial_to_parallel(BitSpan stream);
BitVector parallel_to_serial(const std::vector<BitBlock>& blocks);

BitBlock xor_block(const KeyBlock& key, const BitBlock& block);

BitVector encrypt_stream(const KeyBlock& key, BitSpan plaintext);

// XOR is its own inverse, so this is the same transform as encrypt_stream.
BitVector decrypt_stream(const KeyBlock& key, BitSpan demodulated);

} // namespace molsec::cipher
