#include "molsec/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "molsec/cipher.hpp"
#include "molsec/errors.hpp"

namespace molsec::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;
using experiment::ExperimentConfig;
using keyexchange::KeySource;

namespace {

KeySource parse_policy(const std::string& text) {
    if (text == "a" || text == "A")
        return KeySource::PartyA;
    if (text == "c" || text == "C")
        return KeySource::PartyC;
    throw ConfigFileError("policy must be \"a\" or \"c\", got \"" + text + "\"");
}

experiment::PlaintextMode parse_plaintext_mode(const std::string& text) {
    if (text == "random")
        return experiment::PlaintextMode::Random;
    if (text == "zero")
        return experiment::PlaintextMode::AllZero;
    throw ConfigFileError("plaintext must be \"random\" or \"zero\", got \"" + text + "\"");
}

void reject_unknown(const json& object, std::initializer_list<const char*> known, const std::string& where) {
    for (const auto& [key, value] : object.items()) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
            throw ConfigFileError("unknown config key \"" + where + key + "\"");
    }
}

template <typename T>
void read_if(const json& object, const char* key, T& target) {
    if (object.contains(key))
        target = object.at(key).get<T>();
}

} // namespace

CliConfig parse_config(const std::string& text, CliConfig base) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigFileError(std::string("malformed config: ") + e.what());
    }
    if (!doc.is_object())
        throw ConfigFileError("config document must be a JSON object");

    try {
        reject_unknown(doc,
                       {"n_bits", "frame_bits", "rekey_every_frames", "key_bits", "channel", "energy", "policy",
                        "seed", "attack_trials", "batch_size", "cost_per_molecule", "plaintext", "forced_key_block",
                        "out", "transcript_out"},
                       "");
        ExperimentConfig& cfg = base.experiment;
        read_if(doc, "n_bits", cfg.n_bits);
        read_if(doc, "frame_bits", cfg.frame_bits);
        read_if(doc, "rekey_every_frames", cfg.rekey_every_frames);
        read_if(doc, "key_bits", cfg.key_bits);
        read_if(doc, "seed", cfg.seed);
        read_if(doc, "attack_trials", cfg.attack_trials);
        read_if(doc, "batch_size", cfg.batch_size);
        read_if(doc, "cost_per_molecule", cfg.cost_per_molecule);
        if (doc.contains("policy"))
            cfg.policy = parse_policy(doc.at("policy").get<std::string>());
        if (doc.contains("plaintext"))
            cfg.plaintext = parse_plaintext_mode(doc.at("plaintext").get<std::string>());
        if (doc.contains("forced_key_block"))
            cfg.forced_key_block = parse_bits(doc.at("forced_key_block").get<std::string>());
        if (doc.contains("channel")) {
            const json& ch = doc.at("channel");
            reject_unknown(ch, {"z1", "threshold", "arrival_prob", "background_rate"}, "channel.");
            read_if(ch, "z1", cfg.channel.z1);
            read_if(ch, "threshold", cfg.channel.threshold);
            read_if(ch, "arrival_prob", cfg.channel.arrival_prob);
            read_if(ch, "background_rate", cfg.channel.background_rate);
        }
        if (doc.contains("energy")) {
            const json& en = doc.at("energy");
            reject_unknown(en, {"e_bit_tx", "e_bit_compute"}, "energy.");
            read_if(en, "e_bit_tx", cfg.energy.e_bit_tx);
            // Compute energy follows e_bit_tx at the default ratio unless given.
            if (en.contains("e_bit_tx") && !en.contains("e_bit_compute"))
                cfg.energy.e_bit_compute = energy::kDefaultComputeRatio * cfg.energy.e_bit_tx;
            read_if(en, "e_bit_compute", cfg.energy.e_bit_compute);
        }
        if (doc.contains("out"))
            base.out = doc.at("out").get<std::string>();
        if (doc.contains("transcript_out"))
            base.transcript_out = doc.at("transcript_out").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigFileError(std::string("invalid config value: ") + e.what());
    } catch (const ConfigError& e) {
        throw ConfigFileError(e.what());
    }
    return base;
}

CliConfig load_config(const fs::path& path, CliConfig base) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigFileError("cannot read config file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), std::move(base));
}

namespace {

// Flags are bound to scratch values and only copied into the CliConfig when
// given on the command line, so file values survive unless overridden.
class Overrides {
public:
    template <typename T, typename Setter>
    CLI::Option* add(CLI::App& app, const std::string& name, T default_value, const std::string& description,
                     Setter setter) {
        auto value = std::make_shared<T>(default_value);
        CLI::Option* opt = app.add_option(name, *value, description)->capture_default_str();
        appliers_.push_back([opt, value, setter](CliConfig& cfg) {
            if (opt->count() > 0)
                setter(cfg, *value);
        });
        return opt;
    }

    void apply(CliConfig& cfg) const {
        for (const auto& fn : appliers_)
            fn(cfg);
    }

private:
    std::vector<std::function<void(CliConfig&)>> appliers_;
};

const ExperimentConfig kDefaults{};

void add_channel_flags(CLI::App& app, Overrides& o) {
    o.add(app, "--z1", kDefaults.channel.z1, "molecules per bit-1 impulse (250 keeps the 125 molecules/bit average)",
          [](CliConfig& c, std::uint64_t v) { c.experiment.channel.z1 = v; });
    o.add(app, "--threshold", kDefaults.channel.threshold, "detection threshold z in molecules (evaluation setting)",
          [](CliConfig& c, std::uint64_t v) { c.experiment.channel.threshold = v; });
    o.add(app, "--arrival-prob", kDefaults.channel.arrival_prob, "per-molecule counting probability (1 = ideal)",
          [](CliConfig& c, double v) { c.experiment.channel.arrival_prob = v; });
    o.add(app, "--background-rate", kDefaults.channel.background_rate, "mean spurious molecules per slot (0 = ideal)",
          [](CliConfig& c, double v) { c.experiment.channel.background_rate = v; });
    o.add(app, "--batch-size", kDefaults.batch_size, "slots per key-exchange round (1 = bit by bit)",
          [](CliConfig& c, std::uint64_t v) { c.experiment.batch_size = v; });
    o.add(app, "--policy", std::string("c"), "whose kept-slot bits form the key: a or c",
           [](CliConfig& c, const std::string& v) { c.experiment.policy = parse_policy(v); })
        ->check(CLI::IsMember({"a", "c"}));
}

void add_key_bits_flag(CLI::App& app, Overrides& o) {
    o.add(app, "--key-bits", kDefaults.key_bits, "key length K (evaluation setting: 8)",
          [](CliConfig& c, std::uint64_t v) { c.experiment.key_bits = v; });
}

void add_framing_flags(CLI::App& app, Overrides& o) {
    o.add(app, "--frame-bits", kDefaults.frame_bits, "bits per frame (4 frames of the 4096-bit message)",
          [](CliConfig& c, std::uint64_t v) { c.experiment.frame_bits = v; });
    o.add(app, "--rekey-every", kDefaults.rekey_every_frames, "frames per key (evaluation setting: 2)",
          [](CliConfig& c, std::uint64_t v) { c.experiment.rekey_every_frames = v; });
}

std::vector<std::uint64_t> parse_key_list(const std::string& text) {
    std::vector<std::uint64_t> ks;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(item, &used);
            if (used != item.size() || v <= 0)
                throw std::invalid_argument(item);
            ks.push_back(static_cast<std::uint64_t>(v));
        } catch (const std::logic_error&) {
            throw ConfigError("sweep: key lengths must be positive integers, got \"" + item + "\"");
        }
    }
    if (ks.empty())
        throw ConfigError("sweep: empty key length list");
    return ks;
}

std::string join_indexes(const std::vector<std::size_t>& indexes) {
    std::string s;
    for (std::size_t i = 0; i < indexes.size(); ++i) {
        if (i != 0)
            s += ',';
        s += std::to_string(indexes[i]);
    }
    return s;
}

BitVector text_to_bits(const std::string& text) {
    BitVector bits;
    for (unsigned char ch : text)
        for (int j = 7; j >= 0; --j)
            bits.push_back(static_cast<Bit>((ch >> j) & 1U));
    return bits;
}

std::string bits_to_text(BitSpan bits) {
    std::string text;
    for (std::size_t i = 0; i + 8 <= bits.size(); i += 8) {
        unsigned char ch = 0;
        for (std::size_t j = 0; j < 8; ++j)
            ch = static_cast<unsigned char>((ch << 1) | bits[i + j]);
        text.push_back(std::isprint(ch) ? static_cast<char>(ch) : '.');
    }
    return text;
}

void write_table(const csv::Table& table, const std::optional<fs::path>& path, std::ostream& out) {
    if (path)
        csv::write_csv(table, *path);
    else
        table.write(out);
}

int cmd_exchange(const CliConfig& cfg, std::ostream& out) {
    const ExperimentConfig& e = cfg.experiment;
    Rng rng = make_rng(e.seed, experiment::kKeyExchangeStream, 0);
    const auto session = keyexchange::run_key_exchange(e.key_bits, e.policy, e.channel, e.batch_size, rng);

    out << "key: " << to_string(session.key_a) << '\n';
    if (!session.agreed())
        out << "key_at_c: " << to_string(session.key_c) << '\n';
    out << "policy: " << keyexchange::to_string(session.policy) << '\n';
    out << "slots_used: " << session.slots_transmitted() << '\n';
    out << "kept_indexes: " << join_indexes(session.kept_indexes) << '\n';
    out << "status: " << (session.agreed() ? "agreed" : "key-mismatch") << '\n';

    const auto transcript_path = cfg.transcript_out ? cfg.transcript_out : cfg.out;
    if (transcript_path) {
        std::ofstream file(*transcript_path, std::ios::binary | std::ios::trunc);
        if (!file)
            throw IoError(*transcript_path, "cannot open for writing");
        keyexchange::write_transcript_csv(session, file);
        if (!file)
            throw IoError(*transcript_path, "write failed");
    }
    return session.agreed() ? kExitOk : kExitKeyMismatch;
}

int cmd_send(const CliConfig& cfg, const std::string& plaintext_bits, const std::string& text, std::ostream& out) {
    const ExperimentConfig& e = cfg.experiment;
    BitVector plaintext;
    if (!text.empty())
        plaintext = text_to_bits(text);
    else if (!plaintext_bits.empty())
        plaintext = parse_bits(plaintext_bits);
    else {
        Rng text_rng = make_rng(e.seed, experiment::kPlaintextStream, 0);
        plaintext = keyexchange::random_bits(e.frame_bits, text_rng);
    }

    Rng rng = make_rng(e.seed, experiment::kKeyExchangeStream, 0);
    const auto session = keyexchange::run_key_exchange(e.key_bits, e.policy, e.channel, e.batch_size, rng);
    const auto key_a = cipher::KeyBlock::from_exchanged_key(session.key_a);
    const auto key_c = cipher::KeyBlock::from_exchanged_key(session.key_c);

    const BitVector ciphertext = cipher::encrypt_stream(key_a, plaintext);
    const channel::Emission emission = channel::modulate(ciphertext, e.channel);
    Rng noise_rng = make_rng(e.seed, experiment::kDataNoiseStream, 0);
    BitVector demodulated(ciphertext.size());
    for (std::size_t i = 0; i < emission.size(); ++i) {
        const auto slot = channel::transmit_slot(emission.counts[i], 0, e.channel, noise_rng);
        demodulated[i] = channel::decode_peer_bit(slot.observed, 0, e.channel);
    }
    const BitVector decrypted = cipher::decrypt_stream(key_c, demodulated);

    std::uint64_t errors = 0;
    for (std::size_t i = 0; i < decrypted.size(); ++i)
        errors += decrypted[i] != plaintext[i];

    out << "key: " << to_string(session.key_a) << '\n';
    out << "plaintext: " << to_string(plaintext) << '\n';
    out << "ciphertext: " << to_string(ciphertext) << '\n';
    out << "decrypted: " << to_string(decrypted) << '\n';
    if (!text.empty())
        out << "decrypted_text: " << bits_to_text(decrypted) << '\n';
    out << "molecules_released: " << emission.total() << '\n';
    out << "bit_errors: " << errors << '\n';
    out << "status: " << (session.agreed() ? "agreed" : "key-mismatch") << '\n';
    return session.agreed() ? kExitOk : kExitKeyMismatch;
}

struct EnergyFlags {
    long long n = 4096;
    long long k = 8;
    long long m = 2;
    double ebt = energy::kDefaultBitEnergy;
    double compute_ratio = energy::kDefaultComputeRatio;
    std::string sweep;
};

std::uint64_t positive(long long value, const char* name) {
    if (value <= 0)
        throw ConfigError(std::string("energy: ") + name + " must be >= 1");
    return static_cast<std::uint64_t>(value);
}

int cmd_energy(const CliConfig& cfg, const EnergyFlags& flags, bool m_given, std::ostream& out) {
    const auto params = energy::EnergyParams::with_ratio(flags.ebt, flags.compute_ratio);
    params.validate();
    const std::uint64_t n = positive(flags.n, "--n");

    if (!flags.sweep.empty()) {
        ExperimentConfig base = cfg.experiment;
        base.n_bits = n;
        base.energy = params;
        base.attack_trials = 0;
        base.validate();
        if (m_given && positive(flags.m, "--m") != base.rekey_count())
            throw ConfigError("energy: --m " + std::to_string(flags.m) + " conflicts with the framing, which gives " +
                              std::to_string(base.rekey_count()) + " key generations");
        const auto ks = parse_key_list(flags.sweep);
        const auto rows = experiment::sweep_key_length(base, ks);
        write_table(experiment::sweep_table(rows), cfg.out, out);
        return kExitOk;
    }

    const auto report = energy::analytic_report(n, positive(flags.k, "--k"), positive(flags.m, "--m"), params);
    write_table(energy::report_table(std::span(&report, 1)), cfg.out, out);
    return kExitOk;
}

int cmd_attack(const CliConfig& cfg, long long k, long long trials, std::ostream& out) {
    if (k <= 0)
        throw ConfigError("attack: --k must be >= 1");
    if (trials <= 0)
        throw ConfigError("attack: --trials must be >= 1");
    const auto stats = experiment::monte_carlo_attack(static_cast<std::uint64_t>(k),
                                                      static_cast<std::uint64_t>(trials), cfg.experiment.seed);
    const double band = 3.0 * stats.sigma();
    out << std::setprecision(10);
    out << "key_bits: " << stats.key_bits << '\n';
    out << "trials: " << stats.trials << '\n';
    out << "successes: " << stats.successes << '\n';
    out << "empirical_rate: " << stats.rate() << '\n';
    out << "expected_rate: " << stats.expected_rate() << '\n';
    out << "sigma: " << stats.sigma() << '\n';
    out << "band_3sigma: [" << stats.expected_rate() - band << ", " << stats.expected_rate() + band << "]\n";
    out << "within_band: " << (stats.within_band() ? "yes" : "no") << '\n';
    if (cfg.out)
        csv::write_csv(experiment::attack_table(std::span(&stats, 1)), *cfg.out);
    return stats.within_band() ? kExitOk : kExitBandFailure;
}

int cmd_experiment(const CliConfig& cfg, const std::string& sweep, std::ostream& out) {
    const ExperimentConfig& e = cfg.experiment;
    const auto result = experiment::run_experiment(e);
    const fs::path dir = cfg.out.value_or("experiment_out");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError(dir, "cannot create output directory");

    csv::write_csv(experiment::summary_table(result), dir / "summary.csv");
    csv::write_csv(energy::report_table(std::span(&result.energy, 1)), dir / "energy.csv");
    const experiment::AttackStats attack{e.key_bits, result.attack_trials, result.attack_successes};
    csv::write_csv(experiment::attack_table(std::span(&attack, 1)), dir / "attack.csv");
    for (std::size_t i = 0; i < result.sessions.size(); ++i) {
        const fs::path path = dir / ("transcript_" + std::to_string(i) + ".csv");
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!file)
            throw IoError(path, "cannot open for writing");
        keyexchange::write_transcript_csv(result.sessions[i], file);
    }
    if (!sweep.empty()) {
        ExperimentConfig base = e;
        base.attack_trials = 0;
        const auto rows = experiment::sweep_key_length(base, parse_key_list(sweep));
        csv::write_csv(experiment::sweep_table(rows), dir / "sweep.csv");
    }

    const auto& en = result.energy;
    const double analytic_key = static_cast<double>(en.rekey_count) * en.e_key_exchange;
    out << std::setprecision(10);
    out << "n_bits                     " << en.n_bits << '\n';
    out << "key_bits                   " << en.key_bits << '\n';
    out << "keys_generated             " << result.keys_generated << '\n';
    out << "key_agreement_failures     " << result.key_agreement_failures << '\n';
    out << "bit_errors                 " << result.bit_errors << '\n';
    out << "slots_used_key_exchange    " << result.slots_used_key_exchange << '\n';
    out << "e_plain_total              " << en.e_plain_total << '\n';
    out << "e_secure_total (analytic)  " << en.e_secure_total << '\n';
    out << "e_secure_total (measured)  " << en.e_measured_secure.value_or(0.0) << '\n';
    out << "overhead_ratio             " << en.overhead_ratio() << '\n';
    out << "key exchange analytic      " << analytic_key << '\n';
    out << "key exchange measured/party " << result.e_measured_key_exchange_per_party << '\n';
    out << "key exchange measured/both " << result.e_measured_key_exchange << '\n';
    out << "note: the analytic key-exchange term counts one party; both parties transmit\n";
    out << "attack_success_rate        " << result.attack_success_rate << " over " << result.attack_trials
        << " guesses (expected " << std::ldexp(1.0, -static_cast<int>(e.key_bits)) << ")\n";
    out << "output                     " << dir.string() << '\n';
    return result.key_agreement_failures > 0 ? kExitKeyMismatch : kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Secure molecular communication link simulator", args.empty() ? "molsec" : args.front()};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = kDefaults.seed;
    std::string out_path;
    std::string config_path;
    CLI::Option* seed_opt = app.add_option("--seed", seed, "master seed")->capture_default_str();
    CLI::Option* out_opt = app.add_option("--out", out_path, "output file (directory for experiment)");
    app.add_option("--config", config_path, "JSON config document; flags override its values");

    Overrides overrides;

    CLI::App* exchange = app.add_subcommand("exchange", "run one key exchange and print the key");
    add_channel_flags(*exchange, overrides);
    add_key_bits_flag(*exchange, overrides);
    overrides.add(*exchange, "--transcript-out", std::string(), "write the slot transcript CSV here",
                  [](CliConfig& c, const std::string& v) { c.transcript_out = v; });

    CLI::App* send = app.add_subcommand("send", "exchange a key, then encrypt, transmit and decrypt a message");
    add_channel_flags(*send, overrides);
    add_key_bits_flag(*send, overrides);
    add_framing_flags(*send, overrides);
    std::string plaintext_bits;
    std::string text;
    send->add_option("--plaintext", plaintext_bits, "plaintext as a 0/1 string (multiple of 8 bits)");
    send->add_option("--text", text, "plaintext as ASCII text");

    CLI::App* energy_cmd = app.add_subcommand("energy", "analytic energy report or key-length sweep");
    EnergyFlags energy_flags;
    energy_cmd->add_option("--n", energy_flags.n, "information bits N")->capture_default_str();
    energy_cmd->add_option("--k", energy_flags.k, "key length K")->capture_default_str();
    CLI::Option* m_opt =
        energy_cmd->add_option("--m", energy_flags.m, "key generations M")->capture_default_str();
    energy_cmd->add_option("--ebt", energy_flags.ebt, "molecules per transmitted bit (evaluation setting: 125)")
        ->capture_default_str();
    energy_cmd->add_option("--compute-ratio", energy_flags.compute_ratio, "per-bit compute cost / per-bit transmit cost")
        ->capture_default_str();
    energy_cmd->add_option("--sweep", energy_flags.sweep, "comma-separated key lengths; emits the sweep CSV");
    add_framing_flags(*energy_cmd, overrides);
    add_channel_flags(*energy_cmd, overrides);

    CLI::App* attack = app.add_subcommand("attack", "Monte Carlo eavesdropper against a fresh key");
    long long attack_k = 8;
    long long trials = 10000;
    attack->add_option("--k", attack_k, "key length K")->capture_default_str();
    attack->add_option("--trials", trials, "independent full-key guesses")->capture_default_str();

    CLI::App* experiment_cmd = app.add_subcommand("experiment", "full secured-link simulation");
    add_channel_flags(*experiment_cmd, overrides);
    add_key_bits_flag(*experiment_cmd, overrides);
    add_framing_flags(*experiment_cmd, overrides);
    overrides.add(*experiment_cmd, "--n-bits", kDefaults.n_bits, "information bits N (4096 = 4K)",
                  [](CliConfig& c, std::uint64_t v) { c.experiment.n_bits = v; });
    overrides.add(*experiment_cmd, "--ebt", kDefaults.energy.e_bit_tx, "molecules per transmitted bit (evaluation setting: 125)",
                  [](CliConfig& c, double v) { c.experiment.energy = energy::EnergyParams::with_ratio(v); });
    overrides.add(*experiment_cmd, "--attack-trials", kDefaults.attack_trials, "eavesdropper guesses per key",
                  [](CliConfig& c, std::uint64_t v) { c.experiment.attack_trials = v; });
    overrides.add(*experiment_cmd, "--cost-per-molecule", kDefaults.cost_per_molecule, "energy per released molecule",
                  [](CliConfig& c, double v) { c.experiment.cost_per_molecule = v; });
    overrides.add(*experiment_cmd, "--plaintext", std::string("random"), "plaintext source: random or zero",
                  [](CliConfig& c, const std::string& v) { c.experiment.plaintext = parse_plaintext_mode(v); })
        ->check(CLI::IsMember({"random", "zero"}));
    std::string experiment_sweep;
    experiment_cmd->add_option("--sweep", experiment_sweep, "also write sweep.csv for these key lengths");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args)
        argv.push_back(a.c_str());
    if (argv.empty())
        argv.push_back("molsec");

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    CliConfig cfg;
    try {
        if (!config_path.empty())
            cfg = load_config(config_path, cfg);
        overrides.apply(cfg);
    } catch (const ConfigFileError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomainError;
    }
    if (seed_opt->count() > 0)
        cfg.experiment.seed = seed;
    if (out_opt->count() > 0)
        cfg.out = out_path;

    try {
        if (exchange->parsed())
            return cmd_exchange(cfg, out);
        if (send->parsed())
            return cmd_send(cfg, plaintext_bits, text, out);
        if (energy_cmd->parsed())
            return cmd_energy(cfg, energy_flags, m_opt->count() > 0, out);
        if (attack->parsed())
            return cmd_attack(cfg, attack_k, trials, out);
        if (experiment_cmd->parsed())
            return cmd_experiment(cfg, experiment_sweep, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomainError;
    }
    return kExitUsage;
}

} // namespace molsec::cli
