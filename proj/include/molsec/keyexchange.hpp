#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "molsec/bits.hpp"
#include "molsec/channel.hpp"
#include "molsec/random.hpp"

/**
 * Simultaneous-transmission key agreement.
 *
 * A and C both emit random OOK bits in the same slots. Each cancels its own
 * emission from the superposed count to recover the peer's bit. Slots where
 * the two bits agree are discarded (an observer can tell 0+0 from 1+1); slots
 * where they differ are kept, because the observer sees exactly z1 molecules
 * whichever side sent the one. The key is the kept-slot bits of one agreed
 * party.
 */
namespace molsec::keyexchange {

using channel::ChannelParams;
using channel::MoleculeCount;
using channel::SlotRecord;

enum class KeySource { PartyA, PartyC };

enum class CaseLabel { BothZero, BothOne, Ambiguous };

enum class SessionStatus { Agreed, KeyMismatch };

struct SiftResult {
    std::vector<std::size_t> kept_indexes;
    BitVector kept_self_bits;
    BitVector kept_peer_bits;
};

struct KeySession {
    std::size_t target_key_bits = 0;
    KeySource policy = KeySource::PartyC;
    BitVector sent_a;
    BitVector sent_c;
    BitVector decoded_at_a;  // C's bits as recovered by A
    BitVector decoded_at_c;  // A's bits as recovered by C
    std::vector<std::size_t> kept_indexes;    // A's sift, truncated to the target
    std::vector<std::size_t> kept_indexes_c;  // C's sift; equal to kept_indexes on the ideal channel
    BitVector key_a;
    BitVector key_c;
    std::vector<SlotRecord> transcript;  // every slot, surplus included
    SessionStatus status = SessionStatus::Agreed;

    bool agreed() const noexcept { return status == SessionStatus::Agreed; }
    std::size_t slots_transmitted() const noexcept { return transcript.size(); }

    // Slots up to and including the last one either party needed for its key.
    std::size_t slots_needed() const noexcept;

    bool operator==(const KeySession&) const = default;
};

// Produces the next n transmitted bits of one party.
using BitSource = std::function<BitVector(std::size_t n)>;

BitVector random_bits(std::size_t n, Rng& rng);

SiftResult sift(BitSpan sent_self, BitSpan decoded_peer);

BitVector extract_key(BitSpan kept_a_bits, BitSpan kept_c_bits, KeySource policy);

// Both parties draw their bits from rng (A's batch first, then C's), channel
// noise uses the same stream.
KeySession run_key_exchange(std::size_t target_key_bits, KeySource policy, const ChannelParams& params,
                            std::size_t batch_size, Rng& rng);

// As above with caller-supplied transmitted bits; noise_rng drives only the channel.
KeySession run_key_exchange(std::size_t target_key_bits, KeySource policy, const ChannelParams& params,
                            std::size_t batch_size, const BitSource& source_a, const BitSource& source_c,
                            Rng& noise_rng);

CaseLabel eavesdrop_classify(MoleculeCount observed, const ChannelParams& params);

struct AttackOutcome {
    std::vector<std::size_t> reconstructed_indexes;
    BitVector guessed_key;
    bool success = false;
};

// Passive attacker that knows the protocol, K and the policy: it locates the
// kept slots from the transcript and guesses each key bit uniformly.
AttackOutcome eavesdrop_attack(const KeySession& session, const ChannelParams& params, Rng& rng);

// Columns: slot_index, emitted_a, emitted_c, channel_sum, kept
void write_transcript_csv(const KeySession& session, std::ostream& out);

const char* to_string(KeySource source) noexcept;
const char* to_string(CaseLabel label) noexcept;

} // namespace molsec::keyexchange
