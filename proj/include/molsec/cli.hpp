#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "molsec/experiment.hpp"

namespace molsec::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBandFailure = 3;
inline constexpr int kExitKeyMismatch = 4;

struct CliConfig {
    experiment::ExperimentConfig experiment;
    std::optional<std::filesystem::path> out;
    std::optional<std::filesystem::path> transcript_out;
};

// Thrown for unreadable or malformed config documents (exit 2).
class ConfigFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Applies the keys present in `text` (a JSON object) on top of `base`. Keys
// mirror the ExperimentConfig field names; "channel" and "energy" are nested
// objects. Unknown keys are rejected.
CliConfig parse_config(const std::string& text, CliConfig base = {});
CliConfig load_config(const std::filesystem::path& path, CliConfig base = {});

// Full command line including the program name in args[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace molsec::cli
