#pragma once

#include <cstdint>
#include <vector>

#include "molsec/bits.hpp"
#include "molsec/random.hpp"

/**
 * Slotted on-off keyed molecular channel.
 *
 * A bit 1 is an impulse of z1 molecules released at the start of the slot, a
 * bit 0 releases nothing. Simultaneous transmitters superpose additively and a
 * receiver counts every molecule that arrives within the slot, its own
 * emission included. The ideal channel is memoryless and lossless; two count
 * noise knobs (binomial arrival thinning and Poisson background) are available
 * and default to off.
 */
namespace molsec::channel {

using MoleculeCount = std::uint64_t;

struct ChannelParams {
    std::uint64_t z1 = 250;        // molecules per bit-1 impulse
    std::uint64_t threshold = 20;  // decode 1 iff count >= threshold
    double arrival_prob = 1.0;     // per-molecule counting probability
    double background_rate = 0.0;  // mean spurious molecules per slot

    bool ideal() const noexcept { return arrival_prob == 1.0 && background_rate == 0.0; }

    // Throws ConfigError naming the violated invariant.
    void validate() const;

    bool operator==(const ChannelParams&) const = default;
};

// Molecules released per slot by one transmitter.
struct Emission {
    std::vector<MoleculeCount> counts;

    std::size_t size() const noexcept { return counts.size(); }
    MoleculeCount total() const noexcept;

    bool operator==(const Emission&) const = default;
};

// Ground truth for one slot of a two-party exchange.
struct SlotRecord {
    MoleculeCount emitted_a = 0;
    MoleculeCount emitted_c = 0;
    MoleculeCount channel_sum = 0;
    MoleculeCount observed = 0;  // count seen by every receiver after noise

    bool operator==(const SlotRecord&) const = default;
};

Emission modulate(BitSpan bits, const ChannelParams& params);

std::vector<MoleculeCount> superpose(const Emission& a, const Emission& c);

// Identity on the ideal channel and consumes no randomness there.
MoleculeCount observe(MoleculeCount channel_sum, const ChannelParams& params, Rng& rng);

Bit demodulate(MoleculeCount observed, const ChannelParams& params);

// Full-duplex receive: cancel the own emission (saturating at zero), then
// threshold the remainder.
Bit decode_peer_bit(MoleculeCount observed_total, MoleculeCount own_emission, const ChannelParams& params);

// One slot with both parties emitting.
SlotRecord transmit_slot(MoleculeCount emitted_a, MoleculeCount emitted_c, const ChannelParams& params, Rng& rng);

} // namespace molsec::channel
