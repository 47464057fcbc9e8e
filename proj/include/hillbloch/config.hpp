#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "hillbloch/potential.hpp"

namespace hillbloch {

/// Bad flags, config files or potential files. The CLI maps it to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string potential = "mathieu";  // builtin name or path to a JSON file
    int K = 0;                          // 0 picks a command-specific default
    int grid_size = 128;
    double lambda_max = 1000.0;
    double t = 1.5707963267948966;
    int k_min = 8;
    int k_max = 64;
    double c8 = 1.0;
    bool calibrate_c8 = true;
    int n0 = 8;
    int census_pairs = 50;
    int census_k_max = 24;
    double tol_sum = 1e-9;
    double merge_tol = 0.0;  // 0: 1e-7·Λ_max
    std::string output = ".";
    unsigned workers = 1;
    std::optional<std::uint64_t> seed;  // replaces the seed of random potentials
    bool edge_check = true;
    double edge_check_max = 500.0;
    int oracle_count = 5;
};

/// Overrides fields from a JSON object; unknown keys are rejected.
void apply_json(RunConfig& cfg, const nlohmann::json& j);
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

/// Throws ConfigError on the first invalid field.
void validate(const RunConfig& cfg);

/// Directory holding builtin potentials: $HILLBLOCH_DATA_DIR/potentials, else
/// the compiled-in data directory.
std::filesystem::path builtin_dir();

/// Builds a potential from its JSON description. Supported forms:
///   {"m": m, "blocks": [{"n": n, "re": [[..]], "im": [[..]]}, ...]}
///   {"random": {"m", "degree", "norm", "zero_mean", "seed"}}
///   {"m": m, "grid": N, "degree": d, "samples": [{"re": [[..]], "im": [[..]]}, ...]}
/// each optionally followed by "scale" (applied first) and "mean_diag" (added to Q_0).
MatrixPotential potential_from_json(const nlohmann::json& j, std::optional<std::uint64_t> seed = {});

/// Resolves a builtin name or a file path.
MatrixPotential load_potential(const std::string& source, std::optional<std::uint64_t> seed = {});

}  // namespace hillbloch
