#pragma once

// Ordered partitions of the sensor set [0:M-1] into disjoint groups that
// cover every sensor. Group order matters: it is the transmission order of
// the description chain.

#include <span>
#include <vector>

namespace ttcomp {

struct Partition {
    std::vector<std::vector<int>> groups;  // 0-based sensor indices
    // Set when the threshold construction could not satisfy the final-sum
    // window [theta, 2*theta) and folded the leftover tail into the last
    // group instead.
    bool tail_merged = false;

    int group_count() const { return static_cast<int>(groups.size()); }

    // Every sensor of [0:M-1] appears exactly once; no group is empty.
    void validate(int sensor_count) const;

    // Groups reordered to start at group d: (d, d+1, ..., J-1, 0, ..., d-1).
    Partition rotated(int d) const;
};

// J = floor(M/a) consecutive groups; the first J-1 have size a and the last
// absorbs the remainder (size M - (J-1)a, between a and 2a-1).
Partition block_partition(int sensor_count, int block_size);

// Consecutive intervals whose probability sums cross the threshold: each
// non-final interval stops at the first index where its sum reaches theta,
// and the final interval absorbs the remainder. If theta == 0 or the total
// sum is <= theta, the whole range forms a single group. When the absorbed
// final sum lands outside [theta, 2*theta), tail_merged is set.
Partition threshold_partition(std::span<const double> probs, int theta);

}  // namespace ttcomp
