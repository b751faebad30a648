#include "molsec/energy.hpp"

#include "molsec/errors.hpp"

namespace molsec::energy {

namespace {

void require_positive(std::uint64_t value, const char* name) {
    if (value == 0)
        throw ConfigError(std::string("energy: ") + name + " must be >= 1");
}

} // namespace

void EnergyParams::validate() const {
    if (!(e_bit_tx > 0.0))
        throw ConfigError("energy: e_bit_tx must be > 0");
    if (!(e_bit_compute >= 0.0))
        throw ConfigError("energy: e_bit_compute must be >= 0");
    if (e_bit_compute > e_bit_tx)
        throw ConfigError("energy: e_bit_compute must be <= e_bit_tx");
}

double key_exchange_energy(std::uint64_t key_bits, const EnergyParams& params) {
    require_positive(key_bits, "key_bits");
    return 2.0 * static_cast<double>(key_bits) * params.e_bit_tx;
}

double compute_energy(std::uint64_t n_bits, const EnergyParams& params) {
    require_positive(n_bits, "n_bits");
    return 2.0 * static_cast<double>(n_bits) * params.e_bit_compute;
}

double plain_total_energy(std::uint64_t n_bits, const EnergyParams& params) {
    require_positive(n_bits, "n_bits");
    return static_cast<double>(n_bits) * params.e_bit_tx;
}

double secure_total_energy(std::uint64_t n_bits, std::uint64_t key_bits, std::uint64_t rekey_count,
                           const EnergyParams& params) {
    require_positive(rekey_count, "rekey_count");
    return plain_total_energy(n_bits, params) +
           static_cast<double>(rekey_count) * key_exchange_energy(key_bits, params) + compute_energy(n_bits, params);
}

double secure_total_energy_default_ratio(std::uint64_t n_bits, std::uint64_t key_bits, std::uint64_t rekey_count,
                                         double e_bit_tx) {
    require_positive(n_bits, "n_bits");
    require_positive(key_bits, "key_bits");
    require_positive(rekey_count, "rekey_count");
    const double n = static_cast<double>(n_bits);
    const double km = static_cast<double>(key_bits) * static_cast<double>(rekey_count);
    return (1.002 * n + 2.0 * km) * e_bit_tx;
}

double overhead_ratio(std::uint64_t n_bits, std::uint64_t key_bits, std::uint64_t rekey_count,
                      const EnergyParams& params) {
    return secure_total_energy(n_bits, key_bits, rekey_count, params) / plain_total_energy(n_bits, params);
}

EnergyReport analytic_report(std::uint64_t n_bits, std::uint64_t key_bits, std::uint64_t rekey_count,
                             const EnergyParams& params) {
    EnergyReport report;
    report.n_bits = n_bits;
    report.key_bits = key_bits;
    report.rekey_count = rekey_count;
    report.e_key_exchange = key_exchange_energy(key_bits, params);
    report.e_compute = compute_energy(n_bits, params);
    report.e_plain_total = plain_total_energy(n_bits, params);
    report.e_secure_total = secure_total_energy(n_bits, key_bits, rekey_count, params);
    return report;
}

ReleasedMolecules count_released(std::span<const keyexchange::KeySession> sessions,
                                 std::span<const channel::Emission> data_emissions) {
    ReleasedMolecules released;
    for (const auto& session : sessions) {
        for (const auto& slot : session.transcript) {
            released.key_exchange_a += slot.emitted_a;
            released.key_exchange_c += slot.emitted_c;
        }
    }
    for (const auto& emission : data_emissions)
        released.data += emission.total();
    return released;
}

double measured_energy(std::span<const keyexchange::KeySession> sessions,
                       std::span<const channel::Emission> data_emissions, double cost_per_molecule) {
    return static_cast<double>(count_released(sessions, data_emissions).total()) * cost_per_molecule;
}

csv::Table report_table(std::span<const EnergyReport> reports) {
    csv::Table table({"n_bits", "key_bits", "rekey_count", "e_key_exchange", "e_compute", "e_secure_total",
                      "e_plain_total", "e_measured_secure", "overhead_ratio"});
    for (const auto& r : reports) {
        table.add_row({csv::format(r.n_bits), csv::format(r.key_bits), csv::format(r.rekey_count),
                       csv::format(r.e_key_exchange), csv::format(r.e_compute), csv::format(r.e_secure_total),
                       csv::format(r.e_plain_total), r.e_measured_secure ? csv::format(*r.e_measured_secure) : "",
                       csv::format(r.overhead_ratio())});
    }
    return table;
}

} // namespace molsec::energy
