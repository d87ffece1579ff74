#pragma once

// Exact pmfs of sums of independent Bernoulli variables. Everything is
// direct iterative convolution; the only approximation on offer is explicit
// tail trimming with the dropped mass reported.

#include <span>
#include <vector>

namespace ttcomp {

// pmf of X_1 + ... + X_n with X_i ~ Bernoulli(p_i), support [0:n].
std::vector<double> poisson_binomial_pmf(std::span<const double> probs);

struct TrimmedPmf {
    std::vector<double> w;   // support starts at 0
    double dropped = 0.0;    // total mass trimmed off the upper tail
};

// Same convolution but entries whose upper-tail mass stays below tail_eps
// are trimmed as the support grows. Exact when tail_eps == 0.
TrimmedPmf poisson_binomial_pmf_trimmed(std::span<const double> probs, double tail_eps);

// Binomial(n, p) pmf. Small n uses the convolution; large n evaluates the
// log-pmf over the window where mass exceeds roughly 1e-18 and reports the
// dropped tail, with weights offset entries from zero.
struct WindowedPmf {
    int offset = 0;          // support starts at this count
    std::vector<double> w;
    double dropped = 0.0;
};

WindowedPmf binomial_pmf(long long n, double p);

// Entropy in bits of a windowed pmf (offset does not matter).
double windowed_entropy_bits(const WindowedPmf& pmf);

}  // namespace ttcomp
