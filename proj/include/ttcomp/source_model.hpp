#pragma once

// Memoryless source model: M sensors, each drawing i.i.d. symbols from its
// own pmf over the alphabet [0:q-1]. Sensors are independent of each other.

#include <span>
#include <vector>

#include "ttcomp/rng.hpp"

namespace ttcomp {

class SourceModel {
  public:
    // pmfs[i][v] = P(S_i = v); every row must have length q and sum to 1
    // within 1e-12.
    SourceModel(int q, std::vector<std::vector<double>> pmfs);

    int q() const { return q_; }
    int sensor_count() const { return static_cast<int>(pmfs_.size()); }
    const std::vector<std::vector<double>>& pmfs() const { return pmfs_; }
    const std::vector<double>& pmf(int sensor) const { return pmfs_.at(sensor); }

    // P(S_i = value) for each sensor, in sensor order.
    std::vector<double> indicator_probs(int value) const;

    // One symbol per sensor.
    std::vector<int> sample(RngStream& rng) const;

    // All sensors share the given pmf.
    static SourceModel iid(int sensors, std::vector<double> pmf);

    // Binary alphabet, P(S_i = 1) = beta for every sensor.
    static SourceModel bernoulli(int sensors, double beta);

    // Model restricted to a subset of sensors (order preserved).
    SourceModel restricted(std::span<const int> sensors) const;

  private:
    int q_;
    std::vector<std::vector<double>> pmfs_;
};

}  // namespace ttcomp
