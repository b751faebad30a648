#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "molsec/bits.hpp"
#include "molsec/channel.hpp"
#include "molsec/csv.hpp"
#include "molsec/energy.hpp"
#include "molsec/keyexchange.hpp"

/**
 * End-to-end secured link: periodic key exchange, framed XOR-ciphered data
 * transmission from A to C, energy accounting and a Monte Carlo eavesdropper.
 *
 * All randomness is drawn from streams derived from (seed, stream tag, index),
 * so epochs, frames and attack batches are independent of evaluation order.
 */
namespace molsec::experiment {

using channel::ChannelParams;
using energy::EnergyParams;
using energy::EnergyReport;
using keyexchange::KeySession;
using keyexchange::KeySource;

enum class PlaintextMode { Random, AllZero };

// Stream tags for derive_seed.
inline constexpr std::uint64_t kKeyExchangeStream = 1;
inline constexpr std::uint64_t kPlaintextStream = 2;
inline constexpr std::uint64_t kDataNoiseStream = 3;
inline constexpr std::uint64_t kAttackStream = 4;

struct ExperimentConfig {
    std::uint64_t n_bits = 4096;
    std::uint64_t frame_bits = 1024;
    std::uint64_t rekey_every_frames = 2;
    std::uint64_t key_bits = 8;
    ChannelParams channel;
    EnergyParams energy;
    KeySource policy = KeySource::PartyC;
    std::uint64_t seed = 1;
    std::uint64_t attack_trials = 1000;
    std::uint64_t batch_size = 1;
    double cost_per_molecule = 1.0;
    PlaintextMode plaintext = PlaintextMode::Random;
    // Overrides the exchanged key for ciphering; exchanges still run.
    std::optional<BitVector> forced_key_block;

    std::uint64_t frame_count() const noexcept { return frame_bits ? n_bits / frame_bits : 0; }
    std::uint64_t rekey_count() const noexcept;

    // Throws ConfigError naming the violated invariant.
    void validate() const;

    bool operator==(const ExperimentConfig&) const = default;
};

struct ExperimentResult {
    std::uint64_t keys_generated = 0;
    std::uint64_t key_agreement_failures = 0;
    std::uint64_t bit_errors = 0;
    EnergyReport energy;
    energy::ReleasedMolecules released;
    double e_measured_data = 0.0;
    double e_measured_key_exchange = 0.0;            // both parties
    double e_measured_key_exchange_per_party = 0.0;  // comparable to rekey_count * E_K
    std::uint64_t attack_trials = 0;
    std::uint64_t attack_successes = 0;
    double attack_success_rate = 0.0;
    std::uint64_t slots_used_key_exchange = 0;
    std::vector<KeySession> sessions;

    bool operator==(const ExperimentResult&) const = default;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

struct SweepRow {
    std::uint64_t key_bits = 0;
    EnergyReport energy;
};

std::vector<SweepRow> sweep_key_length(const ExperimentConfig& base, std::span<const std::uint64_t> key_lengths);

struct AttackStats {
    std::uint64_t key_bits = 0;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;

    double rate() const noexcept;
    double expected_rate() const noexcept;  // 2^-K
    double sigma() const noexcept;          // binomial standard error of rate
    bool within_band(double sigmas = 3.0) const noexcept;
};

// `trials` independent uniform guesses against one completed session.
AttackStats attack_session(const KeySession& session, const ChannelParams& params, std::uint64_t trials, Rng& rng);

// Fresh ideal-channel exchange of key_bits, then `trials` guesses.
AttackStats monte_carlo_attack(std::uint64_t key_bits, std::uint64_t trials, std::uint64_t seed);

// Columns: k, m, n, e_secure_analytic, e_secure_measured, e_plain, overhead_ratio
csv::Table sweep_table(std::span<const SweepRow> rows);
// Columns: k, trials, successes, rate, expected_rate
csv::Table attack_table(std::span<const AttackStats> rows);
// One row of the scalar ExperimentResult fields.
csv::Table summary_table(const ExperimentResult& result);

using csv::write_csv;

} // namespace molsec::experiment
