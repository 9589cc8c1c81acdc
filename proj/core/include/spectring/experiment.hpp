#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace spectring {

inline constexpr const char* version_string = "0.1.0";
inline constexpr std::uint64_t default_seed = 1;

// Experiment front end shared by the CLI binary and the test suite.
// A config is a JSON object plus the subcommand name; flag overrides are
// merged in before validation. Unknown keys are rejected. Every output
// file carries a metadata header with the version, the config hash and
// the seed; running the same config twice reproduces the main outputs
// byte for byte (wall-clock metadata goes to a separate sidecar file).

struct Diagnostic {
  enum class Severity { warning, error };
  Severity severity = Severity::error;
  std::string field;
  std::string message;
};

struct ExperimentConfig {
  std::string subcommand; // eig | converge | count | anneal | psi
  nlohmann::json body;    // canonical merged config
};

// FNV-1a over the canonical (sorted-key) dump of the merged config.
std::string config_hash(const ExperimentConfig& cfg);

// Empty result means runnable; warnings do not block. Never throws.
std::vector<Diagnostic> validate(const ExperimentConfig& cfg);

// Exit status: 0 ok, 2 validation failure, 3 numeric failure. Writes
// outputs to the configured path (stdout when "out" is missing) and a
// machine-readable error JSON to `err` on failure.
int run(const ExperimentConfig& cfg, std::ostream& out_stream,
        std::ostream& err_stream);

nlohmann::json diagnostics_to_json(const std::vector<Diagnostic>& ds);

} // namespace spectring
