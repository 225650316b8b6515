#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dkaf/config.hpp"
#include "dkaf/harness.hpp"

namespace dkaf::cli {

enum class Subcommand { Run, Sweep, DatasetsGen, CalibrateBudget };

enum ExitCode : int { kSuccess = 0, kValidationError = 1, kRuntimeError = 2 };

struct CliInvocation {
    Subcommand subcommand = Subcommand::Run;
    ExperimentConfig config;
    Json resolved;  ///< merged preset + file + overrides, as validated
    std::string preset;
    std::filesystem::path out_dir = "out";
    bool verbose = false;
    bool dump_network = false;
    bool dump_dictionaries = false;
    std::vector<std::size_t> sizes;
};

/// Thrown for --help; carries the text to print.
struct HelpRequested {
    std::string text;
};

/// Directory holding the shipped presets: $DKAF_PRESET_DIR, else the
/// directory configured at build time.
std::filesystem::path preset_directory();

/// Resolves a preset name (or a path ending in .json) to its JSON tree.
Json load_preset(const std::string& name_or_path);

/// Presets, then --config, then key=value overrides (later wins). Throws
/// ConfigError on any invalid input and HelpRequested for --help.
CliInvocation parse_and_validate(const std::vector<std::string>& args);

/// Dispatches to the harness or dataset writer. Outputs land in out_dir;
/// files written by a failed invocation are removed.
int execute(const CliInvocation& invocation, std::ostream& out, std::ostream& err);

/// parse_and_validate + execute with the documented exit codes.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dkaf::cli
