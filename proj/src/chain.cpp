#include "ttcomp/chain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ttcomp/math_util.hpp"
#include "ttcomp/pmf.hpp"

namespace ttcomp {

namespace {

std::vector<double> gather(const std::vector<double>& probs, const std::vector<int>& group) {
    std::vector<double> g;
    g.reserve(group.size());
    for (int i : group) g.push_back(probs.at(i));
    return g;
}

}  // namespace

ChainLaw chain_law(const SourceModel& src, int value, int theta, const Partition& partition,
                   int shift) {
    if (theta < 0) throw std::invalid_argument("chain_law: negative threshold");
    partition.validate(src.sensor_count());
    const Partition order = partition.rotated(shift);
    const std::vector<double> probs = src.indicator_probs(value);
    const int j = order.group_count();

    ChainLaw law;
    law.theta = theta;
    law.kernels.reserve(j);
    law.state_pmfs.reserve(j + 1);
    law.below_mass.reserve(j + 1);

    law.state_pmfs.push_back({1.0});
    law.below_mass.push_back(theta > 0 ? 1.0 : 0.0);

    int max_group = 0;
    int prefix = 0;
    for (int m = 0; m < j; ++m) {
        const auto& group = order.groups[m];
        law.kernels.push_back(poisson_binomial_pmf(gather(probs, group)));
        const auto& k = law.kernels.back();
        const auto& prev = law.state_pmfs.back();

        max_group = std::max(max_group, static_cast<int>(group.size()));
        prefix += static_cast<int>(group.size());
        const int umax = (theta == 0) ? 0 : std::min(prefix, theta - 1 + max_group);
        std::vector<double> next(umax + 1, 0.0);

        // Below-threshold states convolve with the kernel; the rest freeze.
        for (int u = 0; u <= umax; ++u) {
            double acc = 0.0;
            const int jlo = std::max(0, u - static_cast<int>(k.size()) + 1);
            const int jhi = std::min(theta - 1, u);
            for (int prev_u = jlo; prev_u <= jhi; ++prev_u) {
                if (prev_u < static_cast<int>(prev.size()))
                    acc += prev[prev_u] * k[u - prev_u];
            }
            if (u >= theta && u < static_cast<int>(prev.size())) acc += prev[u];
            next[u] = acc;
        }
        double below = 0.0;
        for (int u = 0; u < std::min<int>(theta, umax + 1); ++u) below += next[u];
        law.state_pmfs.push_back(std::move(next));
        law.below_mass.push_back(below);
    }
    return law;
}

namespace {

// Shared restricted propagation: only P(U = u) for u < theta is tracked;
// mass that crosses the threshold is absorbed (frozen states emit nothing).
struct RestrictedKernels {
    std::vector<std::vector<double>> low;   // first theta entries per group
    std::vector<double> entropy_bits;       // full-kernel entropy per group
};

RestrictedKernels build_kernels(const std::vector<double>& probs, int theta,
                                const Partition& partition, double tail_eps) {
    RestrictedKernels rk;
    const int j = partition.group_count();
    rk.low.resize(j);
    rk.entropy_bits.resize(j);
    for (int g = 0; g < j; ++g) {
        TrimmedPmf k = poisson_binomial_pmf_trimmed(gather(probs, partition.groups[g]), tail_eps);
        rk.entropy_bits[g] = pmf_entropy_bits(k.w);
        const int keep = std::min<int>(theta, static_cast<int>(k.w.size()));
        rk.low[g].assign(k.w.begin(), k.w.begin() + keep);
    }
    return rk;
}

void restricted_step(std::vector<double>& state, const std::vector<double>& klow, int theta) {
    // state[u], u in [0:theta); transitions that leave the window vanish.
    std::vector<double> next(theta, 0.0);
    for (int u = theta - 1; u >= 0; --u) {
        const double w = state[u];
        if (w == 0.0) continue;
        const int jump_max = std::min<int>(theta - 1 - u, static_cast<int>(klow.size()) - 1);
        for (int jump = 0; jump <= jump_max; ++jump) next[u + jump] += w * klow[jump];
    }
    state.swap(next);
}

}  // namespace

ChainShiftSummary chain_shift_summary(const std::vector<double>& probs, int theta,
                                      const Partition& partition, double tail_eps) {
    partition.validate(static_cast<int>(probs.size()));
    const int j = partition.group_count();
    ChainShiftSummary out;
    out.totals.assign(j, 0.0);
    out.kernel_entropy.assign(j, 0.0);
    out.mean_below_mass.assign(j, 0.0);
    if (theta == 0) return out;

    const RestrictedKernels rk = build_kernels(probs, theta, partition, tail_eps);
    out.kernel_entropy = rk.entropy_bits;

    std::vector<double> state(theta);
    for (int d = 0; d < j; ++d) {
        std::fill(state.begin(), state.end(), 0.0);
        state[0] = 1.0;
        double total = 0.0;
        for (int s = 0; s < j; ++s) {
            double mass = 0.0;
            for (double x : state) mass += x;
            if (mass < tail_eps) break;
            const int g = (d + s) % j;
            out.mean_below_mass[g] += mass;
            total += mass * rk.entropy_bits[g];
            restricted_step(state, rk.low[g], theta);
        }
        out.totals[d] = total;
    }
    for (double& x : out.mean_below_mass) x /= static_cast<double>(j);
    return out;
}

std::vector<double> below_mass_profile(const std::vector<double>& probs, int theta,
                                       const Partition& partition, int shift, double tail_eps) {
    partition.validate(static_cast<int>(probs.size()));
    const int j = partition.group_count();
    std::vector<double> below(j + 1, 0.0);
    if (theta == 0) return below;

    const RestrictedKernels rk = build_kernels(probs, theta, partition, tail_eps);
    std::vector<double> state(theta, 0.0);
    state[0] = 1.0;
    const int d = ((shift % j) + j) % j;
    for (int s = 0; s <= j; ++s) {
        double mass = 0.0;
        for (double x : state) mass += x;
        below[s] = mass;
        if (s == j || mass < tail_eps) break;
        restricted_step(state, rk.low[(d + s) % j], theta);
    }
    return below;
}

}  // namespace ttcomp
