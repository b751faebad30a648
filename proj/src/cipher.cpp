#include "molsec/cipher.hpp"

#include <algorithm>
#include <string>

#include "molsec/errors.hpp"

namespace molsec::cipher {

namespace {

template <typename Block>
Block block_from(BitSpan bits, const char* what) {
    if (bits.size() != kBlockBits)
        throw BlockAlignmentError(std::string(what) + ": expected 8 bits, got " + std::to_string(bits.size()));
    Block block;
    std::copy(bits.begin(), bits.end(), block.bits.begin());
    return block;
}

BitVector xor_stream(const KeyBlock& key, BitSpan stream) {
    std::vector<BitBlock> blocks = serial_to_parallel(stream);
    for (BitBlock& block : blocks)
        block = xor_block(key, block);
    return parallel_to_serial(blocks);
}

} // namespace

BitBlock BitBlock::from_bits(BitSpan bits) {
    return block_from<BitBlock>(bits, "BitBlock");
}

KeyBlock KeyBlock::from_bits(BitSpan bits) {
    return block_from<KeyBlock>(bits, "KeyBlock");
}

KeyBlock KeyBlock::from_exchanged_key(BitSpan key) {
    if (key.empty() || key.size() % kBlockBits != 0)
        throw BlockAlignmentError("KeyBlock: exchanged key length " + std::to_string(key.size()) +
                                  " is not a positive multiple of 8");
    return from_bits(key.first(kBlockBits));
}

std::vector<BitBlock> serial_to_parallel(BitSpan stream) {
    if (stream.empty() || stream.size() % kBlockBits != 0)
        throw BlockAlignmentError("serial_to_parallel: stream length " + std::to_string(stream.size()) +
                                  " is not a positive multiple of 8");
    std::vector<BitBlock> blocks(stream.size() / kBlockBits);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        std::copy_n(stream.begin() + static_cast<std::ptrdiff_t>(b * kBlockBits), kBlockBits, blocks[b].bits.begin());
    return blocks;
}

BitVector parallel_to_serial(const std::vector<BitBlock>& blocks) {
    BitVector stream;
    stream.reserve(blocks.size() * kBlockBits);
    for (const BitBlock& block : blocks)
        stream.insert(stream.end(), block.bits.begin(), block.bits.end());
    return stream;
}

BitBlock xor_block(const KeyBlock& key, const BitBlock& block) {
    BitBlock out;
    for (std::size_t j = 0; j < kBlockBits; ++j)
        out.bits[j] = static_cast<Bit>(key.bits[j] ^ block.bits[j]);
    return out;
}

BitVector encrypt_stream(const KeyBlock& key, BitSpan plaintext) {
    return xor_stream(key, plaintext);
}

BitVector decrypt_stream(const KeyBlock& key, BitSpan demodulated) {
    return xor_stream(key, demodulated);
}

} // namespace molsec::cipher
