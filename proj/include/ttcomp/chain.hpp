#pragma once

// Description chain of one symbol value: groups broadcast in order, and each
// broadcast adds the number of group members holding the value, unless the
// running count has already reached the threshold, in which case the count
// freezes. U_0 = 0;
//   U_m = U_{m-1} + sum_{i in A_m} 1{U_{m-1} < theta and S_i = value}.
// The chain is Markov, and every step with U_{m-1} >= theta is deterministic.

#include <vector>

#include "ttcomp/partition.hpp"
#include "ttcomp/source_model.hpp"

namespace ttcomp {

struct ChainLaw {
    int theta = 0;
    // kernels[m] = pmf of the group-(m+1) increment (Bernoulli-sum over the
    // group's members), in the rotated transmission order.
    std::vector<std::vector<double>> kernels;
    // state_pmfs[m] = pmf of U_m, m = 0..J, each starting at count 0.
    std::vector<std::vector<double>> state_pmfs;
    // below_mass[m] = P(U_m < theta).
    std::vector<double> below_mass;

    int step_count() const { return static_cast<int>(kernels.size()); }
};

// Exact chain law for the given symbol value and threshold. shift rotates
// the transmission order to start at group `shift`.
ChainLaw chain_law(const SourceModel& src, int value, int theta, const Partition& partition,
                   int shift = 0);

// Low-memory sweep over every rotation of the transmission order. Only the
// below-threshold corner of the state is propagated (everything at or above
// theta is frozen and contributes no entropy), so cost per rotation is
// O(steps_until_absorption * theta^2) after kernels are built once.
struct ChainShiftSummary {
    // totals[d] = sum over steps of H(U_m | U_{m-1}) in rotation d, bits.
    std::vector<double> totals;
    // kernel_entropy[g] = H of group g's increment pmf, bits (group ids are
    // unrotated).
    std::vector<double> kernel_entropy;
    // mean_below_mass[g] = average over rotations of P(U < theta) just
    // before group g's step. kernel_entropy[g] * mean_below_mass[g] is the
    // rotation-averaged conditional entropy of group g's step.
    std::vector<double> mean_below_mass;
};

ChainShiftSummary chain_shift_summary(const std::vector<double>& probs, int theta,
                                      const Partition& partition, double tail_eps = 1e-18);

// P(U_m < theta) profile for one rotation, length J+1, computed by the same
// restricted propagation (values after absorption decay to 0).
std::vector<double> below_mass_profile(const std::vector<double>& probs, int theta,
                                       const Partition& partition, int shift,
                                       double tail_eps = 1e-18);

}  // namespace ttcomp
