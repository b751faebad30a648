#include <gtest/gtest.h>

#include <vector>

#include "molsec/channel.hpp"
#include "molsec/errors.hpp"

using namespace molsec;
using namespace molsec::channel;

namespace {

ChannelParams with_z1(std::uint64_t z1, std::uint64_t threshold = 20) {
    ChannelParams p;
    p.z1 = z1;
    p.threshold = threshold;
    return p;
}

} // namespace

TEST(ChannelParams, DefaultsAreIdealAndValid) {
    ChannelParams p;
    EXPECT_TRUE(p.ideal());
    EXPECT_NO_THROW(p.validate());
    EXPECT_EQ(p.z1, 250u);
    EXPECT_EQ(p.threshold, 20u);
}

TEST(ChannelParams, RejectsInvariantViolations) {
    ChannelParams p;
    p.threshold = 0;
    EXPECT_THROW(p.validate(), ConfigError);
    p = ChannelParams{};
    p.threshold = 251;
    EXPECT_THROW(p.validate(), ConfigError);
    p = ChannelParams{};
    p.arrival_prob = 0.0;
    EXPECT_THROW(p.validate(), ConfigError);
    p.arrival_prob = 1.5;
    EXPECT_THROW(p.validate(), ConfigError);
    p = ChannelParams{};
    p.background_rate = -0.1;
    EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Modulate, ImpulseForOneSilenceForZero) {
    EXPECT_EQ(modulate(BitVector{1, 0, 1}, with_z1(125)).counts, (std::vector<MoleculeCount>{125, 0, 125}));
    EXPECT_EQ(modulate(BitVector{0, 0, 0}, with_z1(77)).counts, (std::vector<MoleculeCount>{0, 0, 0}));
    EXPECT_EQ(modulate(BitVector{1, 1, 1, 1}, with_z1(250)).counts,
              (std::vector<MoleculeCount>{250, 250, 250, 250}));
}

TEST(Modulate, EmptyInputThrows) {
    EXPECT_THROW(modulate(BitVector{}, ChannelParams{}), EmptyInputError);
}

TEST(Superpose, TwoPartyWorkedExample) {
    const BitVector a{1, 0, 1, 1, 0, 1, 0, 1};
    const BitVector c{0, 1, 0, 1, 1, 1, 0, 1};
    const auto params = with_z1(125);

    // Oracle: count ones per slot, times z1.
    std::vector<MoleculeCount> expected;
    for (std::size_t i = 0; i < a.size(); ++i)
        expected.push_back((a[i] + c[i]) * 125u);
    ASSERT_EQ(expected, (std::vector<MoleculeCount>{125, 125, 125, 250, 125, 250, 0, 250}));

    EXPECT_EQ(superpose(modulate(a, params), modulate(c, params)), expected);
}

TEST(Superpose, TrivialCases) {
    EXPECT_EQ(superpose(Emission{{0, 0}}, Emission{{0, 0}}), (std::vector<MoleculeCount>{0, 0}));
    EXPECT_EQ(superpose(Emission{{125}}, Emission{{125}}), (std::vector<MoleculeCount>{250}));
}

TEST(Superpose, LengthMismatchThrows) {
    EXPECT_THROW(superpose(Emission{{0, 1}}, Emission{{0}}), LengthMismatchError);
}

TEST(Superpose, ClosureOverRandomOokStreams) {
    Rng rng{7};
    const auto params = with_z1(250);
    for (int trial = 0; trial < 200; ++trial) {
        BitVector a(1 + rng() % 64), c(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = rng() & 1;
            c[i] = rng() & 1;
        }
        for (MoleculeCount s : superpose(modulate(a, params), modulate(c, params)))
            EXPECT_TRUE(s == 0 || s == 250 || s == 500) << s;
    }
}

TEST(Observe, IdentityOnIdealChannel) {
    Rng rng{1};
    const Rng before = rng;
    EXPECT_EQ(observe(250, ChannelParams{}, rng), 250u);
    EXPECT_EQ(rng, before) << "ideal channel must not consume randomness";
}

TEST(Observe, ThinningOfZeroIsZero) {
    ChannelParams p;
    p.arrival_prob = 0.9;
    Rng rng{2};
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(observe(0, p, rng), 0u);
}

TEST(Observe, BinomialMeanOfThinning) {
    ChannelParams p;
    p.arrival_prob = 0.5;
    Rng rng{3};
    double sum = 0.0;
    constexpr int kDraws = 100000;
    for (int i = 0; i < kDraws; ++i)
        sum += static_cast<double>(observe(1000, p, rng));
    const double mean = sum / kDraws;  // binomial mean 1000 * 0.5
    EXPECT_GE(mean, 495.0);
    EXPECT_LE(mean, 505.0);
}

TEST(Observe, BackgroundAddsPoissonMean) {
    ChannelParams p;
    p.background_rate = 4.0;
    Rng rng{4};
    double sum = 0.0;
    constexpr int kDraws = 50000;
    for (int i = 0; i < kDraws; ++i)
        sum += static_cast<double>(observe(0, p, rng));
    EXPECT_NEAR(sum / kDraws, 4.0, 0.06);  // sd of mean = 2 / sqrt(5e4) ~ 0.009
}

TEST(Observe, NeverExceedsSumWithoutBackground) {
    ChannelParams p;
    p.arrival_prob = 0.7;
    Rng rng{5};
    for (MoleculeCount sum : {0u, 1u, 20u, 250u, 500u})
        for (int i = 0; i < 500; ++i)
            EXPECT_LE(observe(sum, p, rng), sum);
}

TEST(Observe, DeterministicPerSeed) {
    ChannelParams p;
    p.arrival_prob = 0.6;
    p.background_rate = 1.5;
    Rng r1{99}, r2{99};
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(observe(500, p, r1), observe(500, p, r2));
}

TEST(Demodulate, ThresholdBoundary) {
    const auto p = with_z1(250, 20);
    EXPECT_EQ(demodulate(19, p), 0);
    EXPECT_EQ(demodulate(20, p), 1);
    EXPECT_EQ(demodulate(0, p), 0);
    EXPECT_EQ(demodulate(0, with_z1(250, 1)), 0);
}

TEST(DecodePeerBit, SubtractsOwnEmission) {
    const auto p = with_z1(125, 20);
    EXPECT_EQ(decode_peer_bit(250, 125, p), 1);  // 250 - 125 = 125 >= 20
    EXPECT_EQ(decode_peer_bit(125, 125, p), 0);  // 125 - 125 = 0 < 20
    EXPECT_EQ(decode_peer_bit(0, 0, p), 0);
}

TEST(DecodePeerBit, SaturatesWhenObservedBelowOwn) {
    const auto p = with_z1(250, 20);
    EXPECT_EQ(decode_peer_bit(100, 250, p), 0);
}

TEST(DecodePeerBit, ExhaustiveOverBitPairs) {
    const auto p = with_z1(250, 20);
    for (Bit a : {0, 1}) {
        for (Bit c : {0, 1}) {
            const auto ea = modulate(BitVector{a}, p);
            const auto ec = modulate(BitVector{c}, p);
            const MoleculeCount sum = superpose(ea, ec)[0];
            EXPECT_EQ(decode_peer_bit(sum, ea.counts[0], p), c) << int(a) << int(c);
            EXPECT_EQ(decode_peer_bit(sum, ec.counts[0], p), a) << int(a) << int(c);
        }
    }
}

TEST(ChannelRoundTrip, IdealChannelReproducesBits) {
    Rng rng{11};
    for (std::uint64_t z1 : {20u, 125u, 250u, 1000u}) {
        const auto p = with_z1(z1, 20);
        for (int trial = 0; trial < 100; ++trial) {
            BitVector bits(1 + rng() % 128);
            for (auto& b : bits)
                b = rng() & 1;
            const auto emission = modulate(bits, p);
            BitVector back;
            for (MoleculeCount count : emission.counts)
                back.push_back(demodulate(observe(count, p, rng), p));
            EXPECT_EQ(back, bits);
        }
    }
}

TEST(TransmitSlot, RecordsSumAndObservation) {
    Rng rng{0};
    const SlotRecord slot = transmit_slot(250, 0, ChannelParams{}, rng);
    EXPECT_EQ(slot.emitted_a, 250u);
    EXPECT_EQ(slot.emitted_c, 0u);
    EXPECT_EQ(slot.channel_sum, 250u);
    EXPECT_EQ(slot.observed, 250u);
}
