#pragma once

// Round-by-round simulation of the group-broadcast protocol. The simulator
// shares the sampling discipline of sample_descriptions, so for one seed the
// receiver's counters match the sampled description chains bit for bit.

#include <cstdint>
#include <map>
#include <vector>

#include "ttcomp/descriptions.hpp"
#include "ttcomp/partition.hpp"
#include "ttcomp/source_model.hpp"
#include "ttcomp/type_threshold.hpp"

namespace ttcomp {

struct ProtocolOptions {
    int draws = 1;                    // source symbols carried per run
    std::uint64_t seed = 0;
    bool early_termination = true;    // skip a round once every counter is saturated
    bool record_trajectories = false; // keep U after every round for entropy estimates
};

struct RoundRecord {
    int value = 0;       // symbol value the round serves
    int position = 0;    // index within the rotated transmission order
    int group = 0;       // original group index of the partition
    bool skipped = false;
    long long received = 0;  // total increment summed over draws
};

struct ProtocolTrace {
    std::vector<int> shifts;                 // rotation per value
    std::vector<std::vector<int>> symbols;   // [t][i]
    std::vector<std::vector<int>> clipped;   // [l][t], min(theta_l, count)
    std::vector<Label> fusion;               // reducer output per draw
    std::vector<RoundRecord> rounds;
    long long rounds_used = 0;
    long long rounds_skipped = 0;
    // trajectories[l][m][t] = counter of value l after round m (rotated
    // order) on draw t; filled only when record_trajectories is set. Skipped
    // rounds repeat the previous state.
    std::vector<std::vector<std::vector<int>>> trajectories;
};

// Runs every value's rounds on sampled data and fuses the clipped counters
// through the reducer. The fused label is checked against a direct
// evaluation of the function on each draw; a mismatch throws.
ProtocolTrace run_protocol(const TypeThresholdFunction& f, const SourceModel& src,
                           const std::vector<Partition>& partitions, const ShiftPolicy& policy,
                           const ProtocolOptions& options);

// Plug-in entropy (bits) of value l's whole counter sequence, estimated from
// the recorded trajectories. Requires record_trajectories.
double empirical_chain_entropy(const ProtocolTrace& trace, int value);

// Empirical distribution of value l's counter after the given round
// (position in the rotated order; position -1 means the initial state).
std::map<int, double> empirical_state_distribution(const ProtocolTrace& trace, int value,
                                                   int position);

struct BinarySearchSimulation {
    std::vector<std::vector<int>> symbols;       // [t][i]
    std::vector<BinarySearchMaxResult> results;  // one search per draw
    int stages = 0;
};

// Samples `draws` realizations (same stream discipline as run_protocol, so a
// shared seed sees the same data) and runs the staged binary search on each,
// using the given partition at every stage. Each reconstructed maximum is
// checked against the true maximum; a mismatch throws.
BinarySearchSimulation run_binary_search_max(const SourceModel& src, const Partition& stage_partition,
                                             std::uint64_t seed, int draws);

}  // namespace ttcomp
