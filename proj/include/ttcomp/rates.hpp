#pragma once

// Computation-rate formulas: achievable rates of the group-broadcast scheme
// over finite-field and Gaussian channels, round-robin interactive rates,
// and the cut-set style upper bounds they are compared against. A rate is
// bits of function value per channel use.

#include <string>
#include <utility>
#include <vector>

#include "ttcomp/descriptions.hpp"
#include "ttcomp/partition.hpp"
#include "ttcomp/source_model.hpp"
#include "ttcomp/type_threshold.hpp"

namespace ttcomp {

enum class RateKind { achievable, upper_bound };

struct RateReport {
    std::string scheme;
    double rate = 0.0;  // bits per channel use; +inf when no step needs channel time
    RateKind kind = RateKind::achievable;
    std::vector<std::pair<std::string, double>> params;
    std::vector<std::string> notes;
};

// Rate at which a group of the given size can push its sum through the
// superposition channel: (1/2) log2+(1/group_size + P).
double compute_forward_rate(long long group_size, double power);

// Achievable rate over a finite-field superposition channel of the given
// capacity: capacity / total description entropy. Assumes the field order
// exceeds every group size (recorded as a note).
RateReport group_broadcast_rate_finite_field(const TypeThresholdFunction& f, const SourceModel& src,
                                             const std::vector<Partition>& partitions,
                                             double capacity_bits);

// Channel-time shares and transmit powers per (value, group).
struct GaussianAllocation {
    std::vector<std::vector<double>> alpha;  // alpha[l][m]
    std::vector<std::vector<double>> power;  // power[l][m]

    // Equal time over every group of every value that transmits
    // (theta_l > 0), with power boosted by the group count: alpha = 1/(A*J_l),
    // power = J_l * P, where A counts transmitting values. For a single
    // transmitting value the rate reduces to
    // min_m log2+(1/|A_m| + J P) / (2 J D_m).
    static GaussianAllocation uniform_time(const TypeThresholdFunction& f,
                                           const std::vector<Partition>& partitions, double power);

    // The optimized-constant substitution: alpha[l][m] = beta * w_l / J_l
    // with w_l proportional to (5/2)log2(1+theta_l) + 12, and
    // power[l][m] = J_l * P / beta. Satisfies the per-sensor budget exactly.
    static GaussianAllocation proportional(const TypeThresholdFunction& f,
                                           const std::vector<Partition>& partitions, double power,
                                           double beta);
};

// Achievable Gaussian rate of the group-broadcast scheme:
//   min over (l, m) of (alpha/2) log2+(1/|A_m| + power) / D_m,
// where D_m is the conditional entropy of group m's step: averaged over all
// rotations under uniform_random shift, or taken at the fixed rotation
// otherwise. Steps with zero conditional entropy need no channel time and
// are skipped. Validates the time budget (sum alpha <= 1) and each sensor's
// power budget (sum of alpha*power over its appearances <= P).
RateReport group_broadcast_rate_gaussian(const TypeThresholdFunction& f, const SourceModel& src,
                                         const std::vector<Partition>& partitions, double power,
                                         const GaussianAllocation& alloc, const ShiftPolicy& policy);

// Closed-form lower bound independent of the partition details:
//   max over beta in (0,1] of (beta/2) log2+(1/M + j_min*P/beta) / C,
// with C the aggregate entropy constant. Maximized by golden section after a
// coarse scan; the report records beta_star.
RateReport group_broadcast_rate_gaussian_optimized(const TypeThresholdFunction& f,
                                                   const SourceModel& src, double power, int j_min);

// Smallest group count over the per-value threshold partitions (values with
// theta_l = 0 contribute their single-group partition).
int threshold_partition_min_group_count(const TypeThresholdFunction& f, const SourceModel& src);

// Round-robin interactive scheme: N rounds, round l spoken by sensor
// kappa[l] with time share alpha[l] and power power[l], conveying
// step_rates[l] bits per source symbol. Rate = min over rounds with
// step_rates > 0 of (alpha/2) log2(1 + power) / step_rate. Time shares must
// sum to 1; each sensor's total alpha*power must stay within its budget.
RateReport round_robin_rate_gaussian(const std::vector<double>& step_rates,
                                     const std::vector<int>& kappa,
                                     const std::vector<double>& alpha,
                                     const std::vector<double>& power, double power_budget);

// Same scheme without power control: rate = (1/2) log2(1+P) / sum step_rates.
RateReport round_robin_rate_gaussian_no_power_control(const std::vector<double>& step_rates,
                                                      double power_budget);

// Upper bound on any interactive round-robin scheme:
// (1/2) log2(1 + M*P) / total_bits, with total_bits the per-symbol
// information the rounds must carry.
RateReport round_robin_upper_bound(double total_bits, int sensors, double power_budget);

// Minimum per-symbol information total of round-robin computation of the
// binary maximum over M i.i.d. Bernoulli(alpha) sensors:
//   M h2(alpha) - (M-1) (1-(1-alpha)^M) h2(((M alpha)/(1-(1-alpha)^M) - 1)/(M-1)).
double binary_max_round_robin_bits(int sensors, double alpha);

struct CutsetOptions {
    // Correlation grid for the symmetric input family
    // K(rho) = P((1-rho) I + rho * ones). Must stay inside [0,1); the full
    // cut takes its analytic rho->1 supremum instead.
    std::vector<double> rho_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};
    // Cuts to evaluate (sets of 0-based sensors). Empty: all singletons plus
    // the full cut.
    std::vector<std::vector<int>> cuts;
};

// Cut-set upper bound over the Gaussian channel:
//   min over cuts of [max over K of (1/2) log2(1 + (M+1-|cut|) sum_ij K_cond)]
//                    / H(f(S) | S_outside_cut).
// Cuts whose conditional function entropy is zero impose no constraint and
// are skipped with a note.
RateReport cutset_bound_gaussian(const TypeThresholdFunction& f, const SourceModel& src,
                                 double power, const CutsetOptions& options = {});

struct CutCapacity {
    std::vector<int> cut;  // 0-based sensors inside the cut
    double capacity_bits = 0.0;
};

// Finite-field cut-set bound with caller-supplied per-cut capacities.
RateReport cutset_bound_finite_field(const TypeThresholdFunction& f, const SourceModel& src,
                                     const std::vector<CutCapacity>& cut_capacities);

}  // namespace ttcomp
