#pragma once

// Sampled description chains and the staged binary-search scheme for the
// maximum. Sampling is deterministic per seed: replays are byte-identical,
// and the protocol simulator reuses the same sampling stream so its counters
// match these chains bit for bit.

#include <cstdint>
#include <vector>

#include "ttcomp/partition.hpp"
#include "ttcomp/source_model.hpp"
#include "ttcomp/type_threshold.hpp"

namespace ttcomp {

struct ShiftPolicy {
    enum class Mode { none, fixed, uniform_random };
    Mode mode = Mode::none;
    int d = 0;  // used by fixed

    static ShiftPolicy none() { return {Mode::none, 0}; }
    static ShiftPolicy fixed(int d) { return {Mode::fixed, d}; }
    static ShiftPolicy uniform_random() { return {Mode::uniform_random, 0}; }
};

// Rotation applied to each value's partition under the policy; uniform draws
// one rotation per value from the given stream (one draw per value, in value
// order).
std::vector<int> draw_shifts(const ShiftPolicy& policy, const std::vector<int>& group_counts,
                             RngStream& rng);

// symbols[t][i] = sensor i's symbol in draw t. Drawing order is fixed
// (t-major, then sensor), so any consumer that replays this call sees
// identical values.
std::vector<std::vector<int>> sample_symbol_matrix(const SourceModel& src, RngStream& rng, int draws);

struct DescriptionSample {
    std::vector<int> shifts;  // rotation per value
    // u[l][m][t] = U_{m+1} of value l's chain on draw t (rotated order).
    std::vector<std::vector<std::vector<int>>> u;
    // clipped[l][t] = min(theta_l, count of value l in draw t).
    std::vector<std::vector<int>> clipped;
    std::vector<std::vector<int>> symbols;  // the sampled matrix
};

// Runs the per-value chains on `draws` sampled columns. partitions[l] drives
// value l; values with theta_l == 0 get empty chains.
DescriptionSample sample_descriptions(const SourceModel& src, const TypeThresholdFunction& f,
                                      const std::vector<Partition>& partitions,
                                      const ShiftPolicy& policy, std::uint64_t seed, int draws);

struct BinarySearchMaxResult {
    std::vector<int> thresholds;      // test value per stage
    std::vector<std::vector<int>> u;  // u[stage][m] = chain values of that stage
    std::vector<int> outcomes;        // final chain value per stage
    int maximum = 0;                  // reconstructed max
};

// Interval binary search for the maximum of one realization: ceil(log2 q)
// stages, each testing "does any sensor hold a symbol >= D" through a
// threshold-1 chain over that stage's partition. D is the upper midpoint of
// the remaining interval [lo:hi]; a positive outcome sets lo = D, otherwise
// hi = D - 1. For power-of-two q these midpoints are checked against the
// closed-form stage thresholds. Reading out min(D_last, q) instead of lo
// would misread, e.g., q = 4 with maximum 2: thresholds 2 then 3, outcomes
// 1 then 0 give lo = 2, while min(D_2, q) would report 3.
BinarySearchMaxResult binary_search_max_descriptions(const std::vector<int>& symbols, int q,
                                                     const std::vector<Partition>& stage_partitions);

// Number of stages the search uses: ceil(log2 q).
int binary_search_stage_count(int q);

}  // namespace ttcomp
