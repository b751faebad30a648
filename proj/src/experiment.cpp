#include "molsec/experiment.hpp"

#include <cmath>
#include <string>

#include "molsec/cipher.hpp"
#include "molsec/errors.hpp"

namespace molsec::experiment {

std::uint64_t ExperimentConfig::rekey_count() const noexcept {
    if (rekey_every_frames == 0)
        return 0;
    return (frame_count() + rekey_every_frames - 1) / rekey_every_frames;
}

void ExperimentConfig::validate() const {
    if (n_bits == 0)
        throw ConfigError("experiment: n_bits must be >= 1");
    if (frame_bits == 0)
        throw ConfigError("experiment: frame_bits must be >= 1");
    if (n_bits % frame_bits != 0)
        throw ConfigError("experiment: n_bits must be a multiple of frame_bits");
    if (frame_bits % cipher::kBlockBits != 0)
        throw ConfigError("experiment: frame_bits must be a multiple of 8");
    if (rekey_every_frames == 0)
        throw ConfigError("experiment: rekey_every_frames must be >= 1");
    if (key_bits == 0 || key_bits % cipher::kBlockBits != 0)
        throw ConfigError("experiment: key_bits must be a positive multiple of 8");
    if (batch_size == 0)
        throw ConfigError("experiment: batch_size must be >= 1");
    if (!(cost_per_molecule > 0.0))
        throw ConfigError("experiment: cost_per_molecule must be > 0");
    if (forced_key_block && forced_key_block->size() != cipher::kBlockBits)
        throw ConfigError("experiment: forced_key_block must be exactly 8 bits");
    channel.validate();
    energy.validate();
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();

    ExperimentResult result;
    const std::uint64_t epochs = config.rekey_count();

    for (std::uint64_t epoch = 0; epoch < epochs; ++epoch) {
        Rng key_rng = make_rng(config.seed, kKeyExchangeStream, epoch);
        KeySession session = keyexchange::run_key_exchange(config.key_bits, config.policy, config.channel,
                                                           config.batch_size, key_rng);
        if (!session.agreed())
            ++result.key_agreement_failures;
        result.slots_used_key_exchange += session.slots_transmitted();
        result.sessions.push_back(std::move(session));
    }
    result.keys_generated = epochs;

    std::vector<channel::Emission> data_emissions;
    data_emissions.reserve(config.frame_count());
    for (std::uint64_t frame = 0; frame < config.frame_count(); ++frame) {
        const KeySession& session = result.sessions[frame / config.rekey_every_frames];
        const cipher::KeyBlock key_at_a = config.forced_key_block
                                              ? cipher::KeyBlock::from_bits(*config.forced_key_block)
                                              : cipher::KeyBlock::from_exchanged_key(session.key_a);
        const cipher::KeyBlock key_at_c = config.forced_key_block
                                              ? key_at_a
                                              : cipher::KeyBlock::from_exchanged_key(session.key_c);

        BitVector plaintext;
        if (config.plaintext == PlaintextMode::AllZero) {
            plaintext.assign(config.frame_bits, 0);
        } else {
            Rng text_rng = make_rng(config.seed, kPlaintextStream, frame);
            plaintext = keyexchange::random_bits(config.frame_bits, text_rng);
        }

        const BitVector ciphertext = cipher::encrypt_stream(key_at_a, plaintext);
        channel::Emission emission = channel::modulate(ciphertext, config.channel);

        // C stays silent during data slots, so its own emission is zero.
        Rng noise_rng = make_rng(config.seed, kDataNoiseStream, frame);
        BitVector demodulated(ciphertext.size());
        for (std::size_t i = 0; i < emission.size(); ++i) {
            const auto slot = channel::transmit_slot(emission.counts[i], 0, config.channel, noise_rng);
            demodulated[i] = channel::decode_peer_bit(slot.observed, 0, config.channel);
        }

        const BitVector decrypted = cipher::decrypt_stream(key_at_c, demodulated);
        for (std::size_t i = 0; i < decrypted.size(); ++i)
            result.bit_errors += decrypted[i] != plaintext[i];
        data_emissions.push_back(std::move(emission));
    }

    result.energy = energy::analytic_report(config.n_bits, config.key_bits, epochs, config.energy);
    result.released = energy::count_released(result.sessions, data_emissions);
    result.e_measured_data = static_cast<double>(result.released.data) * config.cost_per_molecule;
    result.e_measured_key_exchange =
        static_cast<double>(result.released.key_exchange_total()) * config.cost_per_molecule;
    result.e_measured_key_exchange_per_party = result.e_measured_key_exchange / 2.0;
    // Computation is not observable in a molecule count; it enters at its analytic cost.
    result.energy.e_measured_secure =
        energy::measured_energy(result.sessions, data_emissions, config.cost_per_molecule) + result.energy.e_compute;

    for (std::uint64_t epoch = 0; epoch < epochs && config.attack_trials > 0; ++epoch) {
        const KeySession& session = result.sessions[epoch];
        if (!session.agreed())
            continue;
        Rng attack_rng = make_rng(config.seed, kAttackStream, epoch);
        const AttackStats stats = attack_session(session, config.channel, config.attack_trials, attack_rng);
        result.attack_trials += stats.trials;
        result.attack_successes += stats.successes;
    }
    if (result.attack_trials > 0)
        result.attack_success_rate =
            static_cast<double>(result.attack_successes) / static_cast<double>(result.attack_trials);

    return result;
}

std::vector<SweepRow> sweep_key_length(const ExperimentConfig& base, std::span<const std::uint64_t> key_lengths) {
    if (key_lengths.empty())
        throw EmptyInputError("sweep_key_length: no key lengths given");
    std::vector<SweepRow> rows;
    rows.reserve(key_lengths.size());
    for (std::uint64_t k : key_lengths) {
        ExperimentConfig config = base;
        config.key_bits = k;
        rows.push_back({k, run_experiment(config).energy});
    }
    return rows;
}

double AttackStats::rate() const noexcept {
    return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
}

double AttackStats::expected_rate() const noexcept {
    return std::ldexp(1.0, -static_cast<int>(key_bits));
}

double AttackStats::sigma() const noexcept {
    const double p = expected_rate();
    return trials ? std::sqrt(p * (1.0 - p) / static_cast<double>(trials)) : 0.0;
}

bool AttackStats::within_band(double sigmas) const noexcept {
    return std::abs(rate() - expected_rate()) <= sigmas * sigma();
}

AttackStats attack_session(const KeySession& session, const ChannelParams& params, std::uint64_t trials, Rng& rng) {
    AttackStats stats;
    stats.key_bits = session.key_a.size();
    stats.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t)
        stats.successes += keyexchange::eavesdrop_attack(session, params, rng).success;
    return stats;
}

AttackStats monte_carlo_attack(std::uint64_t key_bits, std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0)
        throw ConfigError("monte_carlo_attack: trials must be >= 1");
    const ChannelParams ideal;
    Rng key_rng = make_rng(seed, kKeyExchangeStream, 0);
    const KeySession session = keyexchange::run_key_exchange(key_bits, KeySource::PartyC, ideal, 1, key_rng);
    Rng attack_rng = make_rng(seed, kAttackStream, 0);
    return attack_session(session, ideal, trials, attack_rng);
}

csv::Table sweep_table(std::span<const SweepRow> rows) {
    csv::Table table({"k", "m", "n", "e_secure_analytic", "e_secure_measured", "e_plain", "overhead_ratio"});
    for (const SweepRow& row : rows) {
        const EnergyReport& e = row.energy;
        table.add_row({csv::format(row.key_bits), csv::format(e.rekey_count), csv::format(e.n_bits),
                       csv::format(e.e_secure_total), e.e_measured_secure ? csv::format(*e.e_measured_secure) : "",
                       csv::format(e.e_plain_total), csv::format(e.overhead_ratio())});
    }
    return table;
}

csv::Table attack_table(std::span<const AttackStats> rows) {
    csv::Table table({"k", "trials", "successes", "rate", "expected_rate"});
    for (const AttackStats& s : rows) {
        table.add_row({csv::format(s.key_bits), csv::format(s.trials), csv::format(s.successes), csv::format(s.rate()),
                       csv::format(s.expected_rate())});
    }
    return table;
}

csv::Table summary_table(const ExperimentResult& r) {
    csv::Table table({"keys_generated", "key_agreement_failures", "bit_errors", "slots_used_key_exchange",
                      "molecules_key_exchange_a", "molecules_key_exchange_c", "molecules_data", "e_measured_data",
                      "e_measured_key_exchange", "e_measured_key_exchange_per_party", "e_key_exchange_analytic_total",
                      "attack_trials", "attack_successes", "attack_success_rate"});
    table.add_row({csv::format(r.keys_generated), csv::format(r.key_agreement_failures), csv::format(r.bit_errors),
                   csv::format(r.slots_used_key_exchange), csv::format(r.released.key_exchange_a),
                   csv::format(r.released.key_exchange_c), csv::format(r.released.data),
                   csv::format(r.e_measured_data), csv::format(r.e_measured_key_exchange),
                   csv::format(r.e_measured_key_exchange_per_party),
                   csv::format(static_cast<double>(r.energy.rekey_count) * r.energy.e_key_exchange),
                   csv::format(r.attack_trials), csv::format(r.attack_successes),
                   csv::format(r.attack_success_rate)});
    return table;
}

} // namespace molsec::experiment
