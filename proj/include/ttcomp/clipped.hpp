#pragma once

// Exact distribution of the clipped type vector (min(theta_l, count_l) per
// symbol) under a memoryless source, by dynamic programming over the clipped
// box. Clipping commutes with adding one symbol at a time because counts only
// grow, so clipping after every step equals clipping once at the end.

#include <optional>
#include <span>
#include <vector>

#include "ttcomp/source_model.hpp"
#include "ttcomp/type_threshold.hpp"

namespace ttcomp {

struct ClippedDistribution {
    std::vector<int> theta;      // box bounds per coordinate
    std::vector<double> prob;    // indexed like TypeThresholdFunction tables
                                 // (coordinate 0 fastest)

    std::size_t box_index(std::span<const int> clipped) const;
    std::vector<int> box_point(std::size_t index) const;

    // Marginal pmf of one clipped coordinate, over [0:theta_l].
    std::vector<double> marginal(int coordinate) const;
};

inline constexpr std::size_t kDefaultStateCap = std::size_t(1) << 22;

// Distribution of the clipped type of all sensors in src, starting from
// initial clipped counts (defaults to all zero). Throws ResourceError if the
// clipped box exceeds state_cap.
ClippedDistribution clipped_type_distribution(const SourceModel& src, const std::vector<int>& theta,
                                              const std::optional<std::vector<int>>& initial = std::nullopt,
                                              std::size_t state_cap = kDefaultStateCap);

// H(f(S)) in bits, or H(f(S) | S_cond) when a conditioning sensor set is
// given. Conditioning is exact: realizations of the conditioning set enter
// only through their clipped type, so the average over realizations is taken
// by grouping them by clipped type.
double function_entropy(const TypeThresholdFunction& f, const SourceModel& src,
                        const std::optional<std::vector<int>>& conditioning_sensors = std::nullopt,
                        std::size_t state_cap = kDefaultStateCap);

}  // namespace ttcomp
