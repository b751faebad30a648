#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "molsec/energy.hpp"
#include "molsec/errors.hpp"

using namespace molsec;
using namespace molsec::energy;

namespace {

const EnergyParams kDefault = EnergyParams::with_ratio(125.0);

} // namespace

TEST(EnergyParams, DefaultRatio) {
    EXPECT_DOUBLE_EQ(EnergyParams{}.e_bit_compute, 0.125);
    EXPECT_EQ(EnergyParams{}, kDefault);
    EnergyParams bad{1.0, 2.0};
    EXPECT_THROW(bad.validate(), ConfigError);
    EXPECT_THROW((EnergyParams{0.0, 0.0}).validate(), ConfigError);
}

TEST(KeyExchangeEnergy, Evaluations) {
    EXPECT_DOUBLE_EQ(key_exchange_energy(8, kDefault), 2000.0);
    EXPECT_DOUBLE_EQ(key_exchange_energy(1, EnergyParams{1.0, 0.0}), 2.0);
    EXPECT_DOUBLE_EQ(key_exchange_energy(16, kDefault), 2.0 * key_exchange_energy(8, kDefault));
    EXPECT_THROW(key_exchange_energy(0, kDefault), ConfigError);
}

TEST(ComputeEnergy, Evaluations) {
    EXPECT_DOUBLE_EQ(compute_energy(4096, kDefault), 1024.0);
    EXPECT_DOUBLE_EQ(compute_energy(4096, EnergyParams{125.0, 0.0}), 0.0);
    EXPECT_DOUBLE_EQ(compute_energy(1000, EnergyParams{1.0, 0.001}), 2.0);
}

TEST(PlainTotalEnergy, Evaluations) {
    EXPECT_DOUBLE_EQ(plain_total_energy(4096, kDefault), 512000.0);
    EXPECT_DOUBLE_EQ(plain_total_energy(1, EnergyParams{1.0, 0.0}), 1.0);
    EXPECT_DOUBLE_EQ(plain_total_energy(8192, kDefault), 2.0 * plain_total_energy(4096, kDefault));
}

TEST(SecureTotalEnergy, EvaluationSetting) {
    // (1.002 * 4096 + 2 * 8 * 2) * 125 = (4104.192 + 32) * 125 = 517024
    EXPECT_NEAR(secure_total_energy(4096, 8, 2, kDefault), 517024.0, 517024.0 * 1e-12);
    EXPECT_NEAR(secure_total_energy_default_ratio(4096, 8, 2, 125.0), 517024.0, 517024.0 * 1e-12);
}

TEST(SecureTotalEnergy, GeneralAndClosedFormAgree) {
    Rng rng{31337};
    std::uniform_int_distribution<std::uint64_t> n_dist(1, 1u << 22), k_dist(1, 512), m_dist(1, 64);
    std::uniform_real_distribution<double> e_dist(0.01, 1e4);
    for (int i = 0; i < 1000; ++i) {
        const auto n = n_dist(rng), k = k_dist(rng), m = m_dist(rng);
        const double e = e_dist(rng);
        const double general = secure_total_energy(n, k, m, EnergyParams::with_ratio(e));
        const double closed = secure_total_energy_default_ratio(n, k, m, e);
        ASSERT_LE(std::abs(general - closed) / closed, 1e-12) << n << ' ' << k << ' ' << m << ' ' << e;
    }
}

TEST(SecureTotalEnergy, DecompositionAndMonotonicity) {
    Rng rng{8};
    for (int i = 0; i < 500; ++i) {
        const std::uint64_t n = 1 + rng() % 100000, k = 1 + rng() % 128, m = 1 + rng() % 16;
        const auto r = analytic_report(n, k, m, kDefault);
        EXPECT_DOUBLE_EQ(r.e_secure_total, r.e_plain_total + static_cast<double>(m) * r.e_key_exchange + r.e_compute);
        EXPECT_GE(r.e_secure_total, r.e_plain_total);
        EXPECT_LT(r.e_secure_total, secure_total_energy(n + 1, k, m, kDefault));
        EXPECT_LT(r.e_secure_total, secure_total_energy(n, k + 1, m, kDefault));
        EXPECT_LT(r.e_secure_total, secure_total_energy(n, k, m + 1, kDefault));
    }
}

TEST(OverheadRatio, Evaluations) {
    EXPECT_NEAR(overhead_ratio(4096, 8, 2, kDefault), 1.002 + 32.0 / 4096.0, 1e-12);
    EXPECT_NEAR(overhead_ratio(4096, 8, 2, kDefault), 1.009813, 1e-6);
    EXPECT_NEAR(overhead_ratio(4096, 32, 2, kDefault), 1.033250, 1e-6);
    EXPECT_NEAR(overhead_ratio(1ull << 30, 8, 1, kDefault), 1.002, 1e-7);
}

TEST(MeasuredEnergy, AllZeroDataReleasesNothing) {
    const channel::ChannelParams p;
    const std::vector<channel::Emission> data{channel::modulate(BitVector(4096, 0), p)};
    EXPECT_DOUBLE_EQ(measured_energy({}, data, 1.0), 0.0);
}

TEST(MeasuredEnergy, EquiprobableDataMatchesAverageBitEnergy) {
    // Mean released per bit is z1 / 2 = 125 molecules; sd of one stream is 125 * 64 = 8000.
    const channel::ChannelParams p;  // z1 = 250
    constexpr double kCost = 0.5;
    double total_molecules = 0.0;
    double total_energy = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng{seed};
        const std::vector<channel::Emission> data{channel::modulate(keyexchange::random_bits(4096, rng), p)};
        total_molecules += static_cast<double>(count_released({}, data).total());
        total_energy += measured_energy({}, data, kCost);
    }
    const double mean_molecules = total_molecules / 100.0;
    EXPECT_NEAR(mean_molecules, 4096.0 * 125.0, 0.02 * 4096.0 * 125.0);
    EXPECT_NEAR(total_energy / 100.0, kCost * mean_molecules, 1e-6);
}

TEST(MeasuredEnergy, PerPartyKeyExchangeMatchesAnalytic) {
    const channel::ChannelParams p;
    double per_party = 0.0;
    constexpr int kSessions = 10000;
    for (int i = 0; i < kSessions; ++i) {
        Rng rng = make_rng(77, 1, static_cast<std::uint64_t>(i));
        const auto s = keyexchange::run_key_exchange(8, keyexchange::KeySource::PartyC, p, 1, rng);
        const auto released = count_released(std::span(&s, 1), {});
        per_party += static_cast<double>(released.key_exchange_total()) / 2.0;
    }
    // E[slots] * z1 / 2 = 16 * 125 = 2000 = E_K.
    EXPECT_NEAR(per_party / kSessions, key_exchange_energy(8, kDefault), 0.03 * 2000.0);
}

TEST(ReportTable, ColumnsAndFormatting) {
    auto r = analytic_report(4096, 8, 2, kDefault);
    r.e_measured_secure = 520000.5;
    std::ostringstream out;
    report_table(std::span(&r, 1)).write(out);
    const std::string text = out.str();
    const std::string header =
        "n_bits,key_bits,rekey_count,e_key_exchange,e_compute,e_secure_total,e_plain_total,"
        "e_measured_secure,overhead_ratio\n";
    ASSERT_EQ(text.substr(0, header.size()), header);
    const std::string row = text.substr(header.size());
    EXPECT_EQ(row.substr(0, row.rfind(',')), "4096,8,2,2000,1024,517024,512000,520000.5");
    EXPECT_EQ(row.back(), '\n');
    // Shortest round-trip formatting parses back to the same double.
    EXPECT_EQ(std::stod(row.substr(row.rfind(',') + 1)), r.overhead_ratio());
}
