#pragma once

// Entropy accounting for description chains: exact per-step breakdowns, the
// closed form for binary-max chains under block partitions, and the uniform
// bounds that hold for threshold-crossing partitions.

#include <vector>

#include "ttcomp/chain.hpp"
#include "ttcomp/partition.hpp"
#include "ttcomp/source_model.hpp"
#include "ttcomp/type_threshold.hpp"

namespace ttcomp {

struct EntropyBreakdown {
    // per_step[m] = H(U_{m+1} | U_m) = P(U_m < theta) * H(kernel_{m+1}).
    std::vector<double> per_step;
    double total = 0.0;  // equals the joint entropy H(U_1, ..., U_J)
    double bound = 0.0;  // universal_entropy_bound(theta)
};

// Exact joint entropy of the chain, in bits. The per-step identity holds
// because the chain is Markov and steps from frozen states are
// deterministic.
EntropyBreakdown chain_entropy(const ChainLaw& law);

// Closed form for the binary-max chain (theta = 1) over i.i.d. Bernoulli
// sources and a block partition. The final group's stay-at-zero coefficient
// is (1-beta)^e. derivation_consistent uses e = (J-1)*a, one factor per
// sensor already heard, and matches the exact chain entropy (see tests);
// group_exponent uses e = J-1, one factor per group, and deviates once
// block_size > 1. Both are kept so the difference stays measurable.
enum class ClosedFormVariant { group_exponent, derivation_consistent };

double binary_max_entropy_closed_form(long long sensors, double beta, long long block_size,
                                      ClosedFormVariant variant = ClosedFormVariant::derivation_consistent);

// Entropy cap for a sum of independent Bernoulli variables:
// (1/2) log2(2*pi*e*(sum p_i + 1/12)).
double bernoulli_sum_entropy_bound(const std::vector<double>& probs);

// Uniform cap on the chain entropy achievable with threshold-crossing
// partitions: (5/2) log2(1 + theta) + 12.
double universal_entropy_bound(int theta);

// Aggregate constant over all symbol values: 12q + (5/2) sum_l log2(1+theta_l).
double aggregate_entropy_constant(const TypeThresholdFunction& f);

struct EntropyBudget {
    std::vector<double> per_frequency;  // chain entropy per symbol value, shift 0
    double total = 0.0;
    double constant = 0.0;              // aggregate_entropy_constant
};

// Total description entropy of all per-value chains under the given
// partitions (partitions[l] drives value l's chain).
EntropyBudget description_entropy_budget(const TypeThresholdFunction& f, const SourceModel& src,
                                         const std::vector<Partition>& partitions);

}  // namespace ttcomp
