#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "molsec/channel.hpp"
#include "molsec/csv.hpp"
#include "molsec/keyexchange.hpp"

/**
 * Energy accounting for secured versus plain transmission.
 *
 * Units are molecules: e_bit_tx is the average number released per
 * transmitted bit, and e_bit_compute the cost of one single-bit logic
 * operation expressed in the same unit.
 *
 *   E_K    = 2 K e_bit_tx                     (one key exchange)
 *   E_C    = 2 N e_bit_compute                (XOR at both ends)
 *   E_sec  = N e_bit_tx + M E_K + E_C
 *   E_plain = N e_bit_tx
 *
 * With e_bit_compute = 0.001 e_bit_tx the secured total collapses to
 * (1.002 N + 2 K M) e_bit_tx.
 */
namespace molsec::energy {

inline constexpr double kDefaultComputeRatio = 0.001;
inline constexpr double kDefaultBitEnergy = 125.0;

struct EnergyParams {
    double e_bit_tx = kDefaultBitEnergy;
    double e_bit_compute = kDefaultComputeRatio * kDefaultBitEnergy;

    static EnergyParams with_ratio(double e_bit_tx, double compute_ratio = kDefaultComputeRatio) {
        return {e_bit_tx, compute_ratio * e_bit_tx};
    }

    void validate() const;

    bool operator==(const EnergyParams&) const = default;
};

struct EnergyReport {
    std::uint64_t n_bits = 0;
    std::uint64_t key_bits = 0;
    std::uint64_t rekey_count = 0;
    double e_key_exchange = 0.0;
    double e_compute = 0.0;
    double e_secure_total = 0.0;
    double e_plain_total = 0.0;
    std::optional<double> e_measured_secure;

    double overhead_ratio() const noexcept { return e_secure_total / e_plain_total; }

    bool operator==(const EnergyReport&) const = default;
};

double key_exchange_energy(std::uint64_t key_bits, const EnergyParams& params);
double compute_energy(std::uint64_t n_bits, const EnergyParams& params);
double secure_total_energy(std::uint64_t n_bits, std::uint64_t key_bits, std::uint64_t rekey_count,
                           const EnergyParams& params);
double plain_total_energy(std::uint64_t n_bits, const EnergyParams& params);
double overhead_ratio(std::uint64_t n_bits, std::uint64_t key_bits, std::uint64_t rekey_count,
                      const EnergyParams& params);

// Closed form valid only for the 1/1000 compute ratio.
double secure_total_energy_default_ratio(std::uint64_t n_bits, std::uint64_t key_bits, std::uint64_t rekey_count,
                                         double e_bit_tx);

EnergyReport analytic_report(std::uint64_t n_bits, std::uint64_t key_bits, std::uint64_t rekey_count,
                             const EnergyParams& params);

// Molecules actually released, split by phase and party.
struct ReleasedMolecules {
    std::uint64_t key_exchange_a = 0;
    std::uint64_t key_exchange_c = 0;
    std::uint64_t data = 0;

    std::uint64_t key_exchange_total() const noexcept { return key_exchange_a + key_exchange_c; }
    std::uint64_t total() const noexcept { return key_exchange_total() + data; }

    bool operator==(const ReleasedMolecules&) const = default;
};

ReleasedMolecules count_released(std::span<const keyexchange::KeySession> sessions,
                                 std::span<const channel::Emission> data_emissions);

// Both parties' key-exchange emissions plus the data emissions, times the
// per-molecule cost.
double measured_energy(std::span<const keyexchange::KeySession> sessions,
                       std::span<const channel::Emission> data_emissions, double cost_per_molecule);

// Columns: n_bits, key_bits, rekey_count, e_key_exchange, e_compute,
// e_secure_total, e_plain_total, e_measured_secure, overhead_ratio
csv::Table report_table(std::span<const EnergyReport> reports);

} // namespace molsec::energy
