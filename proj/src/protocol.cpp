#include "ttcomp/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ttcomp/math_util.hpp"

namespace ttcomp {

ProtocolTrace run_protocol(const TypeThresholdFunction& f, const SourceModel& src,
                           const std::vector<Partition>& partitions, const ShiftPolicy& policy,
                           const ProtocolOptions& options) {
    if (f.q() != src.q()) throw std::invalid_argument("run_protocol: alphabet mismatch");
    if (static_cast<int>(partitions.size()) != f.q())
        throw std::invalid_argument("run_protocol: need one partition per symbol value");
    for (const auto& p : partitions) p.validate(src.sensor_count());
    if (options.draws < 1) throw std::invalid_argument("run_protocol: need at least one draw");

    RngStream root(options.seed);
    RngStream shift_rng = root.child(0);
    RngStream sample_rng = root.child(1);

    ProtocolTrace trace;
    std::vector<int> js;
    js.reserve(partitions.size());
    for (const auto& p : partitions) js.push_back(p.group_count());
    trace.shifts = draw_shifts(policy, js, shift_rng);
    trace.symbols = sample_symbol_matrix(src, sample_rng, options.draws);

    const int draws = options.draws;
    trace.clipped.assign(f.q(), std::vector<int>(draws, 0));
    if (options.record_trajectories) trace.trajectories.resize(f.q());

    for (int l = 0; l < f.q(); ++l) {
        const int theta = f.theta()[l];
        if (theta == 0) continue;  // clipped counter is identically zero
        const Partition order = partitions[l].rotated(trace.shifts[l]);
        const int j = order.group_count();
        std::vector<int> u(draws, 0);
        auto* traj = options.record_trajectories ? &trace.trajectories[l] : nullptr;
        if (traj) traj->assign(j, std::vector<int>(draws, 0));
        int saturated = 0;
        for (int m = 0; m < j; ++m) {
            RoundRecord rec;
            rec.value = l;
            rec.position = m;
            rec.group = (trace.shifts[l] + m) % j;
            if (options.early_termination && saturated == draws) {
                rec.skipped = true;
                ++trace.rounds_skipped;
            } else {
                ++trace.rounds_used;
                for (int t = 0; t < draws; ++t) {
                    if (u[t] >= theta) continue;
                    int inc = 0;
                    for (int i : order.groups[m])
                        if (trace.symbols[t][i] == l) ++inc;
                    if (inc > 0) {
                        u[t] += inc;
                        rec.received += inc;
                        if (u[t] >= theta) ++saturated;
                    }
                }
            }
            if (traj) (*traj)[m] = u;
            trace.rounds.push_back(rec);
        }
        for (int t = 0; t < draws; ++t) trace.clipped[l][t] = std::min(theta, u[t]);
    }

    trace.fusion.reserve(draws);
    std::vector<int> column(f.q());
    for (int t = 0; t < draws; ++t) {
        for (int l = 0; l < f.q(); ++l) column[l] = trace.clipped[l][t];
        Label fused = f.reduce(column);
        Label direct = evaluate(f, trace.symbols[t]);
        if (label_to_string(fused) != label_to_string(direct))
            throw std::logic_error("run_protocol: fused label disagrees with direct evaluation");
        trace.fusion.push_back(std::move(fused));
    }
    return trace;
}

double empirical_chain_entropy(const ProtocolTrace& trace, int value) {
    if (value < 0 || value >= static_cast<int>(trace.clipped.size()))
        throw std::invalid_argument("empirical_chain_entropy: value out of range");
    if (trace.trajectories.empty() || trace.trajectories[value].empty())
        throw std::invalid_argument("empirical_chain_entropy: trajectories were not recorded");
    const auto& traj = trace.trajectories[value];
    const int draws = static_cast<int>(traj[0].size());
    std::map<std::vector<int>, long long> counts;
    std::vector<int> key(traj.size());
    for (int t = 0; t < draws; ++t) {
        for (std::size_t m = 0; m < traj.size(); ++m) key[m] = traj[m][t];
        ++counts[key];
    }
    double h = 0.0;
    for (const auto& [_, c] : counts) h += xlog2_inv(static_cast<double>(c) / draws);
    return h;
}

std::map<int, double> empirical_state_distribution(const ProtocolTrace& trace, int value,
                                                   int position) {
    if (value < 0 || value >= static_cast<int>(trace.clipped.size()))
        throw std::invalid_argument("empirical_state_distribution: value out of range");
    if (trace.trajectories.empty() || trace.trajectories[value].empty())
        throw std::invalid_argument("empirical_state_distribution: trajectories were not recorded");
    const auto& traj = trace.trajectories[value];
    const int draws = static_cast<int>(traj[0].size());
    std::map<int, double> dist;
    if (position == -1) {
        dist[0] = 1.0;
        return dist;
    }
    if (position < 0 || position >= static_cast<int>(traj.size()))
        throw std::invalid_argument("empirical_state_distribution: position out of range");
    for (int t = 0; t < draws; ++t) dist[traj[position][t]] += 1.0 / draws;
    return dist;
}

BinarySearchSimulation run_binary_search_max(const SourceModel& src, const Partition& stage_partition,
                                             std::uint64_t seed, int draws) {
    if (draws < 1) throw std::invalid_argument("run_binary_search_max: need at least one draw");
    stage_partition.validate(src.sensor_count());
    RngStream root(seed);
    RngStream sample_rng = root.child(1);

    BinarySearchSimulation sim;
    sim.stages = binary_search_stage_count(src.q());
    sim.symbols = sample_symbol_matrix(src, sample_rng, draws);
    std::vector<Partition> stages(sim.stages, stage_partition);
    sim.results.reserve(draws);
    for (int t = 0; t < draws; ++t) {
        BinarySearchMaxResult r = binary_search_max_descriptions(sim.symbols[t], src.q(), stages);
        int truth = *std::max_element(sim.symbols[t].begin(), sim.symbols[t].end());
        if (r.maximum != truth)
            throw std::logic_error("run_binary_search_max: reconstructed maximum is wrong");
        sim.results.push_back(std::move(r));
    }
    return sim;
}

}  // namespace ttcomp
