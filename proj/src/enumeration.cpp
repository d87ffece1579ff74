#include "ttcomp/enumeration.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ttcomp/math_util.hpp"

namespace ttcomp {

namespace {

std::uint64_t realization_count(const SourceModel& src, std::uint64_t cap) {
    std::uint64_t n = 1;
    for (int i = 0; i < src.sensor_count(); ++i) {
        if (n > cap / static_cast<std::uint64_t>(src.q()))
            throw ResourceError("enumeration: realization count exceeds cap");
        n *= static_cast<std::uint64_t>(src.q());
    }
    return n;
}

// Calls fn(symbols, probability) for every realization.
template <typename Fn>
void for_each_realization(const SourceModel& src, std::uint64_t cap, Fn&& fn) {
    realization_count(src, cap);
    const int m = src.sensor_count();
    std::vector<int> s(m, 0);
    while (true) {
        double p = 1.0;
        for (int i = 0; i < m; ++i) p *= src.pmf(i)[s[i]];
        fn(s, p);
        int i = 0;
        while (i < m) {
            if (++s[i] < src.q()) break;
            s[i] = 0;
            ++i;
        }
        if (i == m) break;
    }
}

// Chain values from the bare definition, in rotated group order.
std::vector<int> chain_values(const std::vector<int>& symbols, int value, int theta,
                              const Partition& order) {
    std::vector<int> u;
    u.reserve(order.group_count());
    int cur = 0;
    for (const auto& group : order.groups) {
        if (cur < theta) {
            for (int i : group)
                if (symbols[i] == value) ++cur;
        }
        u.push_back(cur);
    }
    return u;
}

double map_entropy(const std::map<std::vector<int>, double>& dist) {
    double h = 0.0;
    for (const auto& [_, p] : dist) h += xlog2_inv(p);
    return h;
}

}  // namespace

double enumerate_chain_joint_entropy(const SourceModel& src, int value, int theta,
                                     const Partition& partition, int shift, std::uint64_t cap) {
    partition.validate(src.sensor_count());
    if (value < 0 || value >= src.q())
        throw std::invalid_argument("enumerate_chain_joint_entropy: value outside alphabet");
    if (theta < 0) throw std::invalid_argument("enumerate_chain_joint_entropy: negative threshold");
    const Partition order = partition.rotated(shift);
    std::map<std::vector<int>, double> dist;
    for_each_realization(src, cap, [&](const std::vector<int>& s, double p) {
        if (p == 0.0) return;
        dist[chain_values(s, value, theta, order)] += p;
    });
    return map_entropy(dist);
}

double enumerate_function_entropy(const TypeThresholdFunction& f, const SourceModel& src,
                                  const std::optional<std::vector<int>>& conditioning_sensors,
                                  std::uint64_t cap) {
    if (f.q() != src.q()) throw std::invalid_argument("enumerate_function_entropy: alphabet mismatch");
    const int m = src.sensor_count();
    std::vector<bool> conditioned(m, false);
    if (conditioning_sensors)
        for (int i : *conditioning_sensors) conditioned.at(i) = true;

    // Group realizations by the conditioning sensors' symbols; within each
    // group accumulate the label distribution.
    std::map<std::vector<int>, std::map<std::string, double>> by_cond;
    for_each_realization(src, cap, [&](const std::vector<int>& s, double p) {
        if (p == 0.0) return;
        std::vector<int> key;
        for (int i = 0; i < m; ++i)
            if (conditioned[i]) key.push_back(s[i]);
        by_cond[key][label_to_string(evaluate(f, s))] += p;
    });

    double h = 0.0;
    for (const auto& [_, labels] : by_cond) {
        double w = 0.0;
        for (const auto& [_l, p] : labels) w += p;
        if (w == 0.0) continue;
        for (const auto& [_l, p] : labels) h += w * xlog2_inv(p / w);
    }
    return h;
}

std::map<std::vector<int>, double> enumerate_clipped_distribution(const SourceModel& src,
                                                                  const std::vector<int>& theta,
                                                                  std::uint64_t cap) {
    if (static_cast<int>(theta.size()) != src.q())
        throw std::invalid_argument("enumerate_clipped_distribution: theta length must equal q");
    std::map<std::vector<int>, double> dist;
    for_each_realization(src, cap, [&](const std::vector<int>& s, double p) {
        if (p == 0.0) return;
        std::vector<int> counts(src.q(), 0);
        for (int v : s) ++counts[v];
        for (int l = 0; l < src.q(); ++l) counts[l] = std::min(counts[l], theta[l]);
        dist[counts] += p;
    });
    return dist;
}

std::vector<std::vector<double>> exact_step_conditional_entropies(
    const TypeThresholdFunction& f, const SourceModel& src,
    const std::vector<Partition>& partitions, bool uniform_shift, std::uint64_t cap) {
    if (static_cast<int>(partitions.size()) != f.q())
        throw std::invalid_argument("exact_step_conditional_entropies: need one partition per value");

    // Enumerate rotation combinations (one rotation per value) and, within
    // each, every source realization. For step (l, g) the conditioning is
    // everything transmitted earlier plus all rotations.
    std::vector<int> js(f.q());
    std::uint64_t combos = 1;
    for (int l = 0; l < f.q(); ++l) {
        js[l] = partitions[l].group_count();
        const std::uint64_t width = uniform_shift ? static_cast<std::uint64_t>(js[l]) : 1;
        if (combos > cap / width) throw ResourceError("exact_step_conditional_entropies: too many rotations");
        combos *= width;
    }

    std::vector<std::vector<double>> result(f.q());
    for (int l = 0; l < f.q(); ++l) result[l].assign(js[l], 0.0);

    std::vector<int> shifts(f.q(), 0);
    for (std::uint64_t c = 0; c < combos; ++c) {
        // Decode the rotation combo.
        std::uint64_t rest = c;
        for (int l = 0; l < f.q(); ++l) {
            if (uniform_shift) {
                shifts[l] = static_cast<int>(rest % static_cast<std::uint64_t>(js[l]));
                rest /= static_cast<std::uint64_t>(js[l]);
            }
        }

        // One pass accumulates the joint law of the whole transmitted
        // sequence; conditional entropies then fall out per prefix.
        std::vector<Partition> orders;
        for (int l = 0; l < f.q(); ++l) orders.push_back(partitions[l].rotated(shifts[l]));

        std::map<std::vector<int>, double> seq_dist;
        for_each_realization(src, cap, [&](const std::vector<int>& s, double p) {
            if (p == 0.0) return;
            std::vector<int> seq;
            for (int l = 0; l < f.q(); ++l) {
                const std::vector<int> u = chain_values(s, l, f.theta()[l], orders[l]);
                seq.insert(seq.end(), u.begin(), u.end());
            }
            seq_dist[seq] += p;
        });

        // For each step position, gather H(step | prefix).
        int base = 0;
        for (int l = 0; l < f.q(); ++l) {
            for (int pos = 0; pos < js[l]; ++pos) {
                std::map<std::vector<int>, std::map<int, double>> by_prefix;
                for (const auto& [seq, p] : seq_dist) {
                    std::vector<int> prefix(seq.begin(), seq.begin() + base + pos);
                    by_prefix[prefix][seq[base + pos]] += p;
                }
                double h = 0.0;
                for (const auto& [_, vals] : by_prefix) {
                    double w = 0.0;
                    for (const auto& [_v, p] : vals) w += p;
                    for (const auto& [_v, p] : vals) h += w * xlog2_inv(p / w);
                }
                // The step at this position belongs to group (shift + pos) mod J.
                const int g = (shifts[l] + pos) % js[l];
                result[l][g] += h / static_cast<double>(combos);
            }
            base += js[l];
        }
    }
    return result;
}

}  // namespace ttcomp
