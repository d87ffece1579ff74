#pragma once

// Config-driven experiment runners behind the CLI: entropy-vs-partition
// curves, rate-vs-sensors curves, randomized sweeps against the universal
// entropy bound, oracle cross-checks, rate scaling tables, and protocol
// simulation. Every runner is deterministic for a fixed config and seed.

#include <cstdint>
#include <string>

#include <json.hpp>

namespace ttcomp {

struct ExperimentConfig {
    std::string kind;        // figure3|figure4|lemma_sweep|oracle_check|rate_table|simulate
    nlohmann::json params = nlohmann::json::object();  // runner-specific; empty object = defaults
    std::uint64_t seed = 0;  // stream seed; runners fold it into every draw
    std::string format = "csv";  // csv|json
    std::string out;             // output path; empty writes to stdout
};

struct ExperimentResult {
    std::string csv;         // rendered rows, header first
    nlohmann::json summary;  // machine-readable verdict and key numbers
    bool pass = true;        // all embedded assertions held
};

ExperimentResult run_figure3(const nlohmann::json& params, std::uint64_t seed);
ExperimentResult run_figure4(const nlohmann::json& params, std::uint64_t seed);
ExperimentResult run_lemma_sweep(const nlohmann::json& params, std::uint64_t seed);
ExperimentResult run_oracle_check(const nlohmann::json& params, std::uint64_t seed);
ExperimentResult run_rate_table(const nlohmann::json& params, std::uint64_t seed);
ExperimentResult run_simulate(const nlohmann::json& params, std::uint64_t seed);

// Dispatches on cfg.kind. Unknown kinds throw.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Worker cap for grid dispatch: TTCOMP_WORKERS when set, otherwise the
// hardware concurrency, never below 1.
int worker_count();

}  // namespace ttcomp
