#include "ttcomp/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "ttcomp/chain.hpp"
#include "ttcomp/clipped.hpp"
#include "ttcomp/entropy.hpp"
#include "ttcomp/math_util.hpp"

namespace ttcomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBudgetSlack = 1e-9;

int transmitting_value_count(const TypeThresholdFunction& f) {
    int n = 0;
    for (int t : f.theta())
        if (t > 0) ++n;
    return n;
}

void check_partition_shapes(const TypeThresholdFunction& f, const SourceModel& src,
                            const std::vector<Partition>& partitions) {
    if (static_cast<int>(partitions.size()) != f.q())
        throw std::invalid_argument("need one partition per value");
    for (const auto& p : partitions) p.validate(src.sensor_count());
}

// Conditional entropy of each group's step, in the layout the rate formula
// wants: denom[m] belongs to group m of the partition. Under uniform random
// shifts the below-threshold mass is averaged over rotations; otherwise it
// is read off the single rotation's profile.
std::vector<double> step_denominators(const std::vector<double>& probs, int theta,
                                      const Partition& part, const ShiftPolicy& policy) {
    int j = part.group_count();
    std::vector<double> denom(j, 0.0);
    if (theta == 0) return denom;
    if (policy.mode == ShiftPolicy::Mode::uniform_random) {
        ChainShiftSummary s = chain_shift_summary(probs, theta, part);
        for (int m = 0; m < j; ++m) denom[m] = s.kernel_entropy[m] * s.mean_below_mass[m];
        return denom;
    }
    int d = policy.mode == ShiftPolicy::Mode::fixed ? policy.d : 0;
    if (d < 0 || d >= j) throw std::invalid_argument("shift outside partition");
    std::vector<double> below = below_mass_profile(probs, theta, part, d);
    ChainShiftSummary s = chain_shift_summary(probs, theta, part);  // for kernel entropies
    for (int m = 0; m < j; ++m) {
        int pos = (m - d + j) % j;  // position of group m in the rotated order
        denom[m] = s.kernel_entropy[m] * below[pos];
    }
    return denom;
}

}  // namespace

double compute_forward_rate(long long group_size, double power) {
    if (group_size < 1) throw std::invalid_argument("group size must be positive");
    if (power < 0) throw std::invalid_argument("negative power");
    return 0.5 * log2p(1.0 / static_cast<double>(group_size) + power);
}

RateReport group_broadcast_rate_finite_field(const TypeThresholdFunction& f, const SourceModel& src,
                                             const std::vector<Partition>& partitions,
                                             double capacity_bits) {
    if (capacity_bits <= 0) throw std::invalid_argument("capacity must be positive");
    check_partition_shapes(f, src, partitions);
    EntropyBudget budget = description_entropy_budget(f, src, partitions);
    RateReport rep;
    rep.scheme = "group_broadcast_finite_field";
    rep.kind = RateKind::achievable;
    rep.params.emplace_back("capacity_bits", capacity_bits);
    rep.params.emplace_back("total_description_bits", budget.total);
    rep.notes.push_back("assumes field order exceeds every group size");
    rep.rate = budget.total > 0 ? capacity_bits / budget.total : kInf;
    if (budget.total <= 0) rep.notes.push_back("descriptions carry no information; rate unbounded");
    return rep;
}

GaussianAllocation GaussianAllocation::uniform_time(const TypeThresholdFunction& f,
                                                    const std::vector<Partition>& partitions,
                                                    double power) {
    if (power < 0) throw std::invalid_argument("negative power");
    int active = transmitting_value_count(f);
    GaussianAllocation a;
    a.alpha.resize(f.q());
    a.power.resize(f.q());
    for (int l = 0; l < f.q(); ++l) {
        if (f.theta()[l] == 0) continue;
        int j = partitions[l].group_count();
        a.alpha[l].assign(j, 1.0 / (static_cast<double>(active) * j));
        a.power[l].assign(j, j * power);
    }
    return a;
}

GaussianAllocation GaussianAllocation::proportional(const TypeThresholdFunction& f,
                                                    const std::vector<Partition>& partitions,
                                                    double power, double beta) {
    if (beta <= 0 || beta > 1) throw std::invalid_argument("beta must lie in (0,1]");
    if (power < 0) throw std::invalid_argument("negative power");
    double constant = aggregate_entropy_constant(f);
    GaussianAllocation a;
    a.alpha.resize(f.q());
    a.power.resize(f.q());
    for (int l = 0; l < f.q(); ++l) {
        if (f.theta()[l] == 0) continue;
        int j = partitions[l].group_count();
        double weight = (2.5 * std::log2(1.0 + f.theta()[l]) + 12.0) / constant;
        a.alpha[l].assign(j, beta * weight / j);
        a.power[l].assign(j, j * power / beta);
    }
    return a;
}

RateReport group_broadcast_rate_gaussian(const TypeThresholdFunction& f, const SourceModel& src,
                                         const std::vector<Partition>& partitions, double power,
                                         const GaussianAllocation& alloc,
                                         const ShiftPolicy& policy) {
    if (power < 0) throw std::invalid_argument("negative power");
    check_partition_shapes(f, src, partitions);
    if (static_cast<int>(alloc.alpha.size()) != f.q() ||
        static_cast<int>(alloc.power.size()) != f.q())
        throw std::invalid_argument("allocation must cover every value");

    double alpha_total = 0.0;
    std::vector<double> per_sensor(src.sensor_count(), 0.0);
    for (int l = 0; l < f.q(); ++l) {
        if (f.theta()[l] == 0) continue;
        int j = partitions[l].group_count();
        if (static_cast<int>(alloc.alpha[l].size()) != j ||
            static_cast<int>(alloc.power[l].size()) != j)
            throw std::invalid_argument("allocation shape mismatch with partition");
        for (int m = 0; m < j; ++m) {
            double al = alloc.alpha[l][m];
            double pm = alloc.power[l][m];
            if (al < 0 || pm < 0) throw std::invalid_argument("negative allocation entry");
            alpha_total += al;
            for (int i : partitions[l].groups[m]) per_sensor[i] += al * pm;
        }
    }
    if (alpha_total > 1.0 + kBudgetSlack)
        throw std::invalid_argument("time shares exceed the channel");
    for (int i = 0; i < src.sensor_count(); ++i) {
        if (per_sensor[i] > power * (1.0 + kBudgetSlack) + kBudgetSlack) {
            std::ostringstream msg;
            msg << "sensor " << i << " exceeds its power budget: " << per_sensor[i] << " > "
                << power;
            throw std::invalid_argument(msg.str());
        }
    }

    RateReport rep;
    rep.scheme = "group_broadcast_gaussian";
    rep.kind = RateKind::achievable;
    rep.params.emplace_back("power", power);
    double rate = kInf;
    int skipped = 0;
    for (int l = 0; l < f.q(); ++l) {
        int theta = f.theta()[l];
        if (theta == 0) continue;
        std::vector<double> probs = src.indicator_probs(l);
        std::vector<double> denom = step_denominators(probs, theta, partitions[l], policy);
        for (int m = 0; m < partitions[l].group_count(); ++m) {
            if (denom[m] <= 0.0) {
                ++skipped;
                continue;
            }
            double num = 0.5 * alloc.alpha[l][m] *
                         log2p(1.0 / partitions[l].groups[m].size() + alloc.power[l][m]);
            rate = std::min(rate, num / denom[m]);
        }
    }
    rep.rate = rate;
    if (skipped > 0)
        rep.notes.push_back("skipped " + std::to_string(skipped) +
                            " steps with zero conditional entropy");
    if (rate == kInf) rep.notes.push_back("no step carries information; rate unbounded");
    return rep;
}

int threshold_partition_min_group_count(const TypeThresholdFunction& f, const SourceModel& src) {
    int j_min = std::numeric_limits<int>::max();
    for (int l = 0; l < f.q(); ++l) {
        Partition p = threshold_partition(src.indicator_probs(l), f.theta()[l]);
        j_min = std::min(j_min, p.group_count());
    }
    return j_min;
}

RateReport group_broadcast_rate_gaussian_optimized(const TypeThresholdFunction& f,
                                                   const SourceModel& src, double power,
                                                   int j_min) {
    if (power < 0) throw std::invalid_argument("negative power");
    if (j_min < 1) throw std::invalid_argument("group count must be positive");
    double constant = aggregate_entropy_constant(f);
    double m = src.sensor_count();
    auto value = [&](double beta) {
        return 0.5 * beta * log2p(1.0 / m + j_min * power / beta) / constant;
    };

    // Coarse scan, then golden section on the bracketing interval.
    const int grid = 64;
    double best_beta = 1.0, best = value(1.0);
    for (int i = 1; i < grid; ++i) {
        double b = static_cast<double>(i) / grid;
        double v = value(b);
        if (v > best) {
            best = v;
            best_beta = b;
        }
    }
    double lo = std::max(best_beta - 1.0 / grid, 1e-12);
    double hi = std::min(best_beta + 1.0 / grid, 1.0);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double fc = value(c), fd = value(d);
    while ((hi - lo) > 1e-9 * std::max(1.0, std::abs(best_beta))) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = value(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = value(d);
        }
    }
    double beta_star = 0.5 * (lo + hi);
    double rate = value(beta_star);
    if (best > rate) {  // guard against a flat objective
        rate = best;
        beta_star = best_beta;
    }

    RateReport rep;
    rep.scheme = "group_broadcast_gaussian_closed_form";
    rep.kind = RateKind::achievable;
    rep.rate = rate;
    rep.params.emplace_back("power", power);
    rep.params.emplace_back("beta_star", beta_star);
    rep.params.emplace_back("entropy_constant_bits", constant);
    rep.params.emplace_back("j_min", j_min);
    return rep;
}

RateReport round_robin_rate_gaussian(const std::vector<double>& step_rates,
                                     const std::vector<int>& kappa,
                                     const std::vector<double>& alpha,
                                     const std::vector<double>& power, double power_budget) {
    size_t n = step_rates.size();
    if (kappa.size() != n || alpha.size() != n || power.size() != n)
        throw std::invalid_argument("round-robin arrays must share a length");
    if (power_budget < 0) throw std::invalid_argument("negative power budget");
    double alpha_total = 0.0;
    for (size_t l = 0; l < n; ++l) {
        if (alpha[l] < 0 || power[l] < 0) throw std::invalid_argument("negative allocation entry");
        if (step_rates[l] < 0) throw std::invalid_argument("negative step rate");
        alpha_total += alpha[l];
    }
    if (std::abs(alpha_total - 1.0) > kBudgetSlack)
        throw std::invalid_argument("time shares must sum to one");
    std::map<int, double> per_sensor;
    for (size_t l = 0; l < n; ++l) per_sensor[kappa[l]] += alpha[l] * power[l];
    for (const auto& [sensor, used] : per_sensor) {
        if (used > power_budget * (1.0 + kBudgetSlack) + kBudgetSlack) {
            std::ostringstream msg;
            msg << "sensor " << sensor << " exceeds its power budget: " << used << " > "
                << power_budget;
            throw std::invalid_argument(msg.str());
        }
    }

    RateReport rep;
    rep.scheme = "round_robin_gaussian";
    rep.kind = RateKind::achievable;
    rep.params.emplace_back("power", power_budget);
    double rate = kInf;
    for (size_t l = 0; l < n; ++l) {
        if (step_rates[l] <= 0) continue;
        rate = std::min(rate, 0.5 * alpha[l] * std::log2(1.0 + power[l]) / step_rates[l]);
    }
    rep.rate = rate;
    if (rate == kInf) rep.notes.push_back("no round carries information; rate unbounded");
    return rep;
}

RateReport round_robin_rate_gaussian_no_power_control(const std::vector<double>& step_rates,
                                                      double power_budget) {
    if (power_budget < 0) throw std::invalid_argument("negative power budget");
    double total = 0.0;
    for (double r : step_rates) {
        if (r < 0) throw std::invalid_argument("negative step rate");
        total += r;
    }
    RateReport rep;
    rep.scheme = "round_robin_gaussian_uniform";
    rep.kind = RateKind::achievable;
    rep.params.emplace_back("power", power_budget);
    rep.params.emplace_back("total_bits", total);
    rep.rate = total > 0 ? 0.5 * std::log2(1.0 + power_budget) / total : kInf;
    return rep;
}

RateReport round_robin_upper_bound(double total_bits, int sensors, double power_budget) {
    if (total_bits <= 0) throw std::invalid_argument("information total must be positive");
    if (sensors < 1) throw std::invalid_argument("need at least one sensor");
    if (power_budget < 0) throw std::invalid_argument("negative power budget");
    RateReport rep;
    rep.scheme = "round_robin_upper_bound";
    rep.kind = RateKind::upper_bound;
    rep.params.emplace_back("power", power_budget);
    rep.params.emplace_back("total_bits", total_bits);
    rep.rate = 0.5 * std::log2(1.0 + sensors * power_budget) / total_bits;
    return rep;
}

double binary_max_round_robin_bits(int sensors, double alpha) {
    if (sensors < 2) throw std::invalid_argument("need at least two sensors");
    if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must lie in [0,1]");
    if (alpha == 0.0 || alpha == 1.0) return 0.0;
    double m = sensors;
    // 1 - (1-alpha)^M, computed stably for small alpha.
    double t = -std::expm1(m * std::log1p(-alpha));
    double inner = (m * alpha / t - 1.0) / (m - 1.0);
    inner = std::clamp(inner, 0.0, 1.0);
    return m * h2(alpha) - (m - 1.0) * t * h2(inner);
}

RateReport cutset_bound_gaussian(const TypeThresholdFunction& f, const SourceModel& src,
                                 double power, const CutsetOptions& options) {
    if (power < 0) throw std::invalid_argument("negative power");
    int m = src.sensor_count();
    std::vector<std::vector<int>> cuts = options.cuts;
    if (cuts.empty()) {
        for (int i = 0; i < m; ++i) cuts.push_back({i});
        std::vector<int> full(m);
        for (int i = 0; i < m; ++i) full[i] = i;
        cuts.push_back(full);
    }
    for (double rho : options.rho_grid)
        if (rho < 0 || rho >= 1) throw std::invalid_argument("rho must lie in [0,1)");

    RateReport rep;
    rep.scheme = "cutset_gaussian";
    rep.kind = RateKind::upper_bound;
    rep.params.emplace_back("power", power);
    double bound = kInf;
    for (const auto& cut : cuts) {
        std::set<int> inside(cut.begin(), cut.end());
        if (inside.empty() || inside.size() != cut.size())
            throw std::invalid_argument("cut must be a nonempty set of sensors");
        for (int i : cut)
            if (i < 0 || i >= m) throw std::invalid_argument("cut names an unknown sensor");
        std::vector<int> outside;
        for (int i = 0; i < m; ++i)
            if (!inside.count(i)) outside.push_back(i);

        double denom = function_entropy(f, src, outside);
        if (denom < 1e-15) {
            std::ostringstream msg;
            msg << "cut of size " << cut.size() << " imposes no constraint";
            rep.notes.push_back(msg.str());
            continue;
        }

        int k = static_cast<int>(cut.size());
        double receive_gain = m + 1 - k;
        double numer;
        if (k == m) {
            // Fully correlated inputs: sum of the covariance tends to M^2 P.
            numer = 0.5 * std::log2(1.0 + m * static_cast<double>(m) * power);
        } else {
            numer = 0.0;
            for (double rho : options.rho_grid) {
                // K(rho) = P((1-rho) I + rho J); conditional covariance of the
                // cut given the rest via the Schur complement.
                Eigen::MatrixXd a(k, k);
                for (int r = 0; r < k; ++r)
                    for (int c = 0; c < k; ++c) a(r, c) = power * (r == c ? 1.0 : rho);
                int kc = m - k;
                Eigen::MatrixXd cc(kc, kc);
                for (int r = 0; r < kc; ++r)
                    for (int c = 0; c < kc; ++c) cc(r, c) = power * (r == c ? 1.0 : rho);
                // Cross block is constant rho*P, so only row sums matter.
                Eigen::VectorXd cross = Eigen::VectorXd::Constant(kc, power * rho * k);
                Eigen::VectorXd solved = cc.ldlt().solve(cross);
                double sum_cond = a.sum() - cross.dot(solved);
                numer = std::max(numer, 0.5 * std::log2(1.0 + receive_gain * sum_cond));
            }
        }
        bound = std::min(bound, numer / denom);
    }
    rep.rate = bound;
    if (bound == kInf) rep.notes.push_back("no evaluated cut constrains the rate");
    return rep;
}

RateReport cutset_bound_finite_field(const TypeThresholdFunction& f, const SourceModel& src,
                                     const std::vector<CutCapacity>& cut_capacities) {
    if (cut_capacities.empty()) throw std::invalid_argument("need at least one cut capacity");
    int m = src.sensor_count();
    RateReport rep;
    rep.scheme = "cutset_finite_field";
    rep.kind = RateKind::upper_bound;
    double bound = kInf;
    for (const auto& entry : cut_capacities) {
        std::set<int> inside(entry.cut.begin(), entry.cut.end());
        if (inside.empty() || inside.size() != entry.cut.size())
            throw std::invalid_argument("cut must be a nonempty set of sensors");
        for (int i : entry.cut)
            if (i < 0 || i >= m) throw std::invalid_argument("cut names an unknown sensor");
        if (entry.capacity_bits <= 0) throw std::invalid_argument("cut capacity must be positive");
        std::vector<int> outside;
        for (int i = 0; i < m; ++i)
            if (!inside.count(i)) outside.push_back(i);
        double denom = function_entropy(f, src, outside);
        if (denom < 1e-15) {
            rep.notes.push_back("a cut imposes no constraint");
            continue;
        }
        bound = std::min(bound, entry.capacity_bits / denom);
    }
    rep.rate = bound;
    if (bound == kInf) rep.notes.push_back("no evaluated cut constrains the rate");
    return rep;
}

}  // namespace ttcomp
