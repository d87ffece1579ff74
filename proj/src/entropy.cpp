#include "ttcomp/entropy.hpp"

#include <cmath>
#include <stdexcept>

#include "ttcomp/math_util.hpp"
#include "ttcomp/pmf.hpp"

namespace ttcomp {

EntropyBreakdown chain_entropy(const ChainLaw& law) {
    EntropyBreakdown out;
    out.bound = universal_entropy_bound(law.theta);
    out.per_step.reserve(law.kernels.size());
    for (std::size_t m = 0; m < law.kernels.size(); ++m) {
        const double h = law.below_mass[m] * pmf_entropy_bits(law.kernels[m]);
        out.per_step.push_back(h);
        out.total += h;
    }
    return out;
}

double binary_max_entropy_closed_form(long long sensors, double beta, long long block_size,
                                      ClosedFormVariant variant) {
    if (sensors < 1) throw std::invalid_argument("closed form: need at least one sensor");
    if (block_size < 1 || block_size > sensors)
        throw std::invalid_argument("closed form: block size outside [1, M]");
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("closed form: beta outside (0,1]");

    const long long j = sensors / block_size;
    const long long last = sensors - (j - 1) * block_size;
    const double h_block = windowed_entropy_bits(binomial_pmf(block_size, beta));
    const double h_last = windowed_entropy_bits(binomial_pmf(last, beta));

    // Sum over the first J-1 steps of P(U_{m-1}=0) * H(block kernel); the
    // stay-at-zero probability after m-1 full blocks is (1-beta)^{(m-1)a}.
    const double x = std::pow(1.0 - beta, static_cast<double>(block_size));
    double first_coeff = 0.0;
    if (j >= 2) {
        if (x == 1.0) {
            first_coeff = static_cast<double>(j - 1);
        } else {
            first_coeff = (1.0 - std::pow(x, static_cast<double>(j - 1))) / (1.0 - x);
        }
    }
    const double exponent = (variant == ClosedFormVariant::derivation_consistent)
                                ? static_cast<double>((j - 1) * block_size)
                                : static_cast<double>(j - 1);
    const double last_coeff = std::pow(1.0 - beta, exponent);
    return first_coeff * h_block + last_coeff * h_last;
}

double bernoulli_sum_entropy_bound(const std::vector<double>& probs) {
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("bernoulli_sum_entropy_bound: probability outside [0,1]");
        sum += p;
    }
    return 0.5 * std::log2(2.0 * kPi * std::exp(1.0) * (sum + 1.0 / 12.0));
}

double universal_entropy_bound(int theta) {
    if (theta < 0) throw std::invalid_argument("universal_entropy_bound: negative threshold");
    return 2.5 * std::log2(1.0 + static_cast<double>(theta)) + 12.0;
}

double aggregate_entropy_constant(const TypeThresholdFunction& f) {
    double s = 0.0;
    for (int t : f.theta()) s += std::log2(1.0 + static_cast<double>(t));
    return 12.0 * static_cast<double>(f.q()) + 2.5 * s;
}

EntropyBudget description_entropy_budget(const TypeThresholdFunction& f, const SourceModel& src,
                                         const std::vector<Partition>& partitions) {
    if (static_cast<int>(partitions.size()) != f.q())
        throw std::invalid_argument("description_entropy_budget: need one partition per symbol value");
    EntropyBudget out;
    out.constant = aggregate_entropy_constant(f);
    out.per_frequency.reserve(f.q());
    for (int l = 0; l < f.q(); ++l) {
        const int theta = f.theta()[l];
        double total = 0.0;
        if (theta > 0) {
            const std::vector<double> probs = src.indicator_probs(l);
            const Partition& part = partitions[l];
            const std::vector<double> below = below_mass_profile(probs, theta, part, 0);
            for (int g = 0; g < part.group_count(); ++g) {
                if (below[g] == 0.0) continue;
                TrimmedPmf k = poisson_binomial_pmf_trimmed(
                    [&] {
                        std::vector<double> gp;
                        gp.reserve(part.groups[g].size());
                        for (int i : part.groups[g]) gp.push_back(probs[i]);
                        return gp;
                    }(),
                    1e-18);
                total += below[g] * pmf_entropy_bits(k.w);
            }
        }
        out.per_frequency.push_back(total);
        out.total += total;
    }
    return out;
}

}  // namespace ttcomp
