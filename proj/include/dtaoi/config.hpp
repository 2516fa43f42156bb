#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dtaoi/qbd.hpp"
#include "dtaoi/simulator.hpp"
#include "dtaoi/traffic.hpp"

namespace dtaoi {

struct SimSettings {
    std::uint64_t horizon = 1'000'000;
    std::uint64_t warmup = kDefaultWarmupSlots;
    std::uint64_t seed = 1;
};

struct SearchSettings {
    double alpha = 1.0;
    std::optional<double> beta;
    double grid_step = 0.01;
};

/// Parsed scenario file. JSON object with keys
///   sources (array of probabilities), q, discipline ("npb"|"pb"|"npsbr"),
///   tagged_source (1-based, default 1),
///   solver {tol, max_iter}, sim {horizon, warmup, seed},
///   search {alpha, beta, grid_step}.
/// Unknown keys are rejected.
struct Config {
    Scenario scenario;
    SolverOptions solver;
    SimSettings sim;
    SearchSettings search;
    std::string hash;  // FNV-1a of the source text
};

/// Throws InvalidInput whose message starts with the offending field path,
/// e.g. "sim.horizon: expected a non-negative integer".
Config parse_config(std::string_view text);
Config load_config(const std::string& path);

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// 17 significant digits, independent of locale.
std::string format_double(double value);

using Fields = std::vector<std::pair<std::string, std::string>>;

struct Provenance {
    std::string config_hash;
    double tol = 0.0;
    int max_iter = 0;
    std::optional<std::uint64_t> seed;
    Fields extra;
};

std::string tool_version();

/// "# key=value" lines for CSV outputs.
void write_provenance(std::ostream& os, const Provenance& p);

} // namespace dtaoi
