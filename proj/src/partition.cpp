#include "ttcomp/partition.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace ttcomp {

void Partition::validate(int sensor_count) const {
    std::vector<bool> seen(sensor_count, false);
    int covered = 0;
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("Partition: empty group");
        for (int i : g) {
            if (i < 0 || i >= sensor_count)
                throw std::invalid_argument("Partition: sensor index " + std::to_string(i) +
                                            " out of range");
            if (seen[i]) throw std::invalid_argument("Partition: sensor " + std::to_string(i) +
                                                     " appears twice");
            seen[i] = true;
            ++covered;
        }
    }
    if (covered != sensor_count) throw std::invalid_argument("Partition: does not cover all sensors");
}

Partition Partition::rotated(int d) const {
    const int j = group_count();
    if (j == 0) throw std::invalid_argument("Partition::rotated: no groups");
    d = ((d % j) + j) % j;
    Partition out;
    out.tail_merged = tail_merged;
    out.groups.reserve(j);
    for (int s = 0; s < j; ++s) out.groups.push_back(groups[(d + s) % j]);
    return out;
}

Partition block_partition(int sensor_count, int block_size) {
    if (sensor_count < 1) throw std::invalid_argument("block_partition: need at least one sensor");
    if (block_size < 1 || block_size > sensor_count)
        throw std::invalid_argument("block_partition: block size outside [1, M]");
    const int j = sensor_count / block_size;
    Partition p;
    p.groups.reserve(j);
    int next = 0;
    for (int g = 0; g < j; ++g) {
        const int end = (g == j - 1) ? sensor_count : next + block_size;
        std::vector<int> group(end - next);
        std::iota(group.begin(), group.end(), next);
        p.groups.push_back(std::move(group));
        next = end;
    }
    return p;
}

Partition threshold_partition(std::span<const double> probs, int theta) {
    const int m = static_cast<int>(probs.size());
    if (m < 1) throw std::invalid_argument("threshold_partition: need at least one probability");
    if (theta < 0) throw std::invalid_argument("threshold_partition: negative threshold");
    for (double p : probs)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("threshold_partition: probability outside [0,1]");

    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);

    Partition p;
    if (theta == 0 || total <= static_cast<double>(theta)) {
        std::vector<int> all(m);
        std::iota(all.begin(), all.end(), 0);
        p.groups.push_back(std::move(all));
        return p;
    }

    // Greedy sweep: close a group at the first index where its sum reaches
    // theta. Each closed group has sum in [theta, theta+1) since every
    // probability is at most 1.
    std::vector<int> current;
    double sum = 0.0;
    std::vector<double> group_sums;
    for (int i = 0; i < m; ++i) {
        current.push_back(i);
        sum += probs[i];
        if (sum >= static_cast<double>(theta)) {
            p.groups.push_back(current);
            group_sums.push_back(sum);
            current.clear();
            sum = 0.0;
        }
    }
    // Leftover tail with sum < theta: fold into the last closed group. This
    // keeps the final sum below 2*theta + 1; if it lands at or above
    // 2*theta, the target window is unreachable for this input and the
    // partition is flagged.
    if (!current.empty()) {
        auto& last = p.groups.back();
        last.insert(last.end(), current.begin(), current.end());
        group_sums.back() += sum;
        if (group_sums.back() >= 2.0 * static_cast<double>(theta)) p.tail_merged = true;
    }
    return p;
}

}  // namespace ttcomp
