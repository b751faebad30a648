#include "molsec/channel.hpp"

#include <numeric>
#include <random>
#include <string>

#include "molsec/errors.hpp"

namespace molsec::channel {

void ChannelParams::validate() const {
    if (threshold < 1)
        throw ConfigError("channel: threshold must be >= 1");
    if (z1 < 1)
        throw ConfigError("channel: z1 must be >= 1");
    if (threshold > z1)
        throw ConfigError("channel: threshold (" + std::to_string(threshold) + ") must be <= z1 (" +
                          std::to_string(z1) + ")");
    if (!(arrival_prob > 0.0 && arrival_prob <= 1.0))
        throw ConfigError("channel: arrival_prob must lie in (0, 1]");
    if (!(background_rate >= 0.0))
        throw ConfigError("channel: background_rate must be >= 0");
}

MoleculeCount Emission::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), MoleculeCount{0});
}

Emission modulate(BitSpan bits, const ChannelParams& params) {
    if (bits.empty())
        throw EmptyInputError("modulate: empty bit sequence");
    Emission out;
    out.counts.reserve(bits.size());
    for (Bit b : bits)
        out.counts.push_back(b ? params.z1 : 0);
    return out;
}

std::vector<MoleculeCount> superpose(const Emission& a, const Emission& c) {
    if (a.size() != c.size())
        throw LengthMismatchError("superpose: emissions of length " + std::to_string(a.size()) + " and " +
                                  std::to_string(c.size()));
    std::vector<MoleculeCount> sum(a.size());
    for (std::size_t i = 0; i < sum.size(); ++i)
        sum[i] = a.counts[i] + c.counts[i];
    return sum;
}

MoleculeCount observe(MoleculeCount channel_sum, const ChannelParams& params, Rng& rng) {
    if (params.ideal())
        return channel_sum;

    MoleculeCount counted = channel_sum;
    if (params.arrival_prob < 1.0 && channel_sum > 0) {
        std::binomial_distribution<MoleculeCount> thinning(channel_sum, params.arrival_prob);
        counted = thinning(rng);
    }
    if (params.background_rate > 0.0) {
        std::poisson_distribution<MoleculeCount> background(params.background_rate);
        counted += background(rng);
    }
    return counted;
}

Bit demodulate(MoleculeCount observed, const ChannelParams& params) {
    return observed < params.threshold ? 0 : 1;
}

Bit decode_peer_bit(MoleculeCount observed_total, MoleculeCount own_emission, const ChannelParams& params) {
    const MoleculeCount remainder = observed_total > own_emission ? observed_total - own_emission : 0;
    return demodulate(remainder, params);
}

SlotRecord transmit_slot(MoleculeCount emitted_a, MoleculeCount emitted_c, const ChannelParams& params, Rng& rng) {
    SlotRecord slot;
    slot.emitted_a = emitted_a;
    slot.emitted_c = emitted_c;
    slot.channel_sum = emitted_a + emitted_c;
    slot.observed = observe(slot.channel_sum, params, rng);
    return slot;
}

} // namespace molsec::channel
