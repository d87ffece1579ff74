#include "ttcomp/descriptions.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ttcomp {

std::vector<int> draw_shifts(const ShiftPolicy& policy, const std::vector<int>& group_counts,
                             RngStream& rng) {
    std::vector<int> shifts(group_counts.size(), 0);
    for (std::size_t l = 0; l < group_counts.size(); ++l) {
        const int j = group_counts[l];
        if (j < 1) throw std::invalid_argument("draw_shifts: empty partition");
        switch (policy.mode) {
            case ShiftPolicy::Mode::none:
                shifts[l] = 0;
                break;
            case ShiftPolicy::Mode::fixed:
                shifts[l] = ((policy.d % j) + j) % j;
                break;
            case ShiftPolicy::Mode::uniform_random:
                shifts[l] = rng.next_index(j);
                break;
        }
    }
    return shifts;
}

std::vector<std::vector<int>> sample_symbol_matrix(const SourceModel& src, RngStream& rng,
                                                   int draws) {
    if (draws < 1) throw std::invalid_argument("sample_symbol_matrix: need at least one draw");
    std::vector<std::vector<int>> symbols;
    symbols.reserve(draws);
    for (int t = 0; t < draws; ++t) symbols.push_back(src.sample(rng));
    return symbols;
}

DescriptionSample sample_descriptions(const SourceModel& src, const TypeThresholdFunction& f,
                                      const std::vector<Partition>& partitions,
                                      const ShiftPolicy& policy, std::uint64_t seed, int draws) {
    if (f.q() != src.q()) throw std::invalid_argument("sample_descriptions: alphabet mismatch");
    if (static_cast<int>(partitions.size()) != f.q())
        throw std::invalid_argument("sample_descriptions: need one partition per symbol value");
    for (const auto& p : partitions) p.validate(src.sensor_count());

    RngStream root(seed);
    RngStream shift_rng = root.child(0);
    RngStream sample_rng = root.child(1);

    DescriptionSample out;
    std::vector<int> js;
    js.reserve(partitions.size());
    for (const auto& p : partitions) js.push_back(p.group_count());
    out.shifts = draw_shifts(policy, js, shift_rng);
    out.symbols = sample_symbol_matrix(src, sample_rng, draws);

    out.u.resize(f.q());
    out.clipped.assign(f.q(), std::vector<int>(draws, 0));
    for (int l = 0; l < f.q(); ++l) {
        const int theta = f.theta()[l];
        if (theta == 0) continue;  // frozen from the start; nothing to send
        const Partition order = partitions[l].rotated(out.shifts[l]);
        out.u[l].assign(order.group_count(), std::vector<int>(draws, 0));
        for (int t = 0; t < draws; ++t) {
            int cur = 0;
            for (int m = 0; m < order.group_count(); ++m) {
                if (cur < theta) {
                    for (int i : order.groups[m])
                        if (out.symbols[t][i] == l) ++cur;
                }
                out.u[l][m][t] = cur;
            }
            out.clipped[l][t] = std::min(theta, cur);
        }
    }
    return out;
}

int binary_search_stage_count(int q) {
    if (q < 2) throw std::invalid_argument("binary_search_stage_count: alphabet size must be at least 2");
    int stages = 0;
    int span = 1;
    while (span < q) {
        span *= 2;
        ++stages;
    }
    return stages;
}

BinarySearchMaxResult binary_search_max_descriptions(const std::vector<int>& symbols, int q,
                                                     const std::vector<Partition>& stage_partitions) {
    if (symbols.empty()) throw std::invalid_argument("binary search: empty realization");
    for (int s : symbols)
        if (s < 0 || s >= q) throw std::invalid_argument("binary search: symbol outside alphabet");
    const int stages = binary_search_stage_count(q);
    if (static_cast<int>(stage_partitions.size()) != stages)
        throw std::invalid_argument("binary search: need exactly " + std::to_string(stages) +
                                    " stage partitions");

    const bool power_of_two = (q & (q - 1)) == 0;
    BinarySearchMaxResult out;
    int lo = 0, hi = q - 1;
    int closed_form_acc = 0;  // sum of out_j * 2^{stage - j} maintained per stage
    for (int stage = 1; stage <= stages; ++stage) {
        const int size = hi - lo + 1;
        const int test = lo + (size + 1) / 2;
        if (power_of_two) {
            // Same midpoints as the closed-form stage thresholds.
            closed_form_acc *= 2;
            const int closed_form = (q >> stage) * (1 + closed_form_acc);
            if (test != closed_form)
                throw std::logic_error("binary search: midpoint deviates from closed-form threshold");
        }
        out.thresholds.push_back(test);

        // Threshold-1 chain on the indicator "symbol >= test".
        const Partition& part = stage_partitions[static_cast<std::size_t>(stage - 1)];
        part.validate(static_cast<int>(symbols.size()));
        std::vector<int> u;
        u.reserve(part.group_count());
        int cur = 0;
        for (const auto& group : part.groups) {
            if (cur < 1) {
                for (int i : group)
                    if (symbols[i] >= test) ++cur;
            }
            u.push_back(cur);
        }
        const int outcome = u.back();
        out.u.push_back(std::move(u));
        out.outcomes.push_back(outcome);
        if (outcome > 0) {
            lo = test;
            closed_form_acc += 1;
        } else {
            hi = test - 1;
        }
    }
    out.maximum = lo;
    return out;
}

}  // namespace ttcomp
