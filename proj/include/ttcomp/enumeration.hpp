#pragma once

// Brute-force reference computations by full enumeration of source
// realizations. These deliberately avoid the dynamic programs and closed
// forms elsewhere in the library: they recompute everything from the bare
// definitions so the two paths can check each other.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ttcomp/partition.hpp"
#include "ttcomp/source_model.hpp"
#include "ttcomp/type_threshold.hpp"

namespace ttcomp {

inline constexpr std::uint64_t kDefaultEnumCap = 20'000'000;

// Joint entropy H(U_1, ..., U_J) of the description chain for one symbol
// value, from the chain definition applied to every realization.
double enumerate_chain_joint_entropy(const SourceModel& src, int value, int theta,
                                     const Partition& partition, int shift = 0,
                                     std::uint64_t cap = kDefaultEnumCap);

// H(f(S)) or H(f(S) | S_cond) by enumerating every realization.
double enumerate_function_entropy(const TypeThresholdFunction& f, const SourceModel& src,
                                  const std::optional<std::vector<int>>& conditioning_sensors =
                                      std::nullopt,
                                  std::uint64_t cap = kDefaultEnumCap);

// Distribution of the clipped type by enumeration; keys are clipped count
// vectors.
std::map<std::vector<int>, double> enumerate_clipped_distribution(const SourceModel& src,
                                                                  const std::vector<int>& theta,
                                                                  std::uint64_t cap = kDefaultEnumCap);

// Exact per-step conditional entropies of the full transmission sequence:
// all value-0 steps, then value-1 steps, and so on, with an independent
// uniform rotation per value when uniform_shift is set. Entry [l][g] is the
// conditional entropy of group g's step of value l's chain given every
// earlier transmission and all rotations. Feasible only for small M.
std::vector<std::vector<double>> exact_step_conditional_entropies(
    const TypeThresholdFunction& f, const SourceModel& src,
    const std::vector<Partition>& partitions, bool uniform_shift,
    std::uint64_t cap = kDefaultEnumCap);

}  // namespace ttcomp
