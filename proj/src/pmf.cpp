#include "ttcomp/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ttcomp/math_util.hpp"

namespace ttcomp {

std::vector<double> poisson_binomial_pmf(std::span<const double> probs) {
    std::vector<double> w{1.0};
    w.reserve(probs.size() + 1);
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("poisson_binomial_pmf: probability outside [0,1]");
        w.push_back(0.0);
        for (std::size_t k = w.size() - 1; k > 0; --k)
            w[k] = w[k] * (1.0 - p) + w[k - 1] * p;
        w[0] *= 1.0 - p;
    }
    return w;
}

TrimmedPmf poisson_binomial_pmf_trimmed(std::span<const double> probs, double tail_eps) {
    TrimmedPmf out;
    out.w = {1.0};
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("poisson_binomial_pmf_trimmed: probability outside [0,1]");
        out.w.push_back(0.0);
        for (std::size_t k = out.w.size() - 1; k > 0; --k)
            out.w[k] = out.w[k] * (1.0 - p) + out.w[k - 1] * p;
        out.w[0] *= 1.0 - p;
        // Trim the upper tail while its total mass stays negligible.
        double tail = 0.0;
        std::size_t keep = out.w.size();
        while (keep > 1 && tail + out.w[keep - 1] < tail_eps) {
            tail += out.w[keep - 1];
            --keep;
        }
        if (keep < out.w.size()) {
            out.dropped += tail;
            out.w.resize(keep);
        }
    }
    return out;
}

WindowedPmf binomial_pmf(long long n, double p) {
    if (n < 0) throw std::invalid_argument("binomial_pmf: negative count");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_pmf: p outside [0,1]");
    WindowedPmf out;
    if (n == 0 || p == 0.0) {
        out.w = {1.0};
        return out;
    }
    if (p == 1.0) {
        out.offset = static_cast<int>(std::min<long long>(n, 1LL << 30));
        out.w = {1.0};
        return out;
    }
    if (n <= 4096) {
        std::vector<double> probs(static_cast<std::size_t>(n), p);
        out.w = poisson_binomial_pmf(probs);
        return out;
    }

    // Window around the mean covering all mass above ~1e-18: mean +- 10 sigma
    // with a constant margin handles every n and p seen here.
    const double mean = static_cast<double>(n) * p;
    const double sd = std::sqrt(mean * (1.0 - p));
    const long long lo = std::max<long long>(0, static_cast<long long>(mean - 10.0 * sd - 30.0));
    const long long hi = std::min<long long>(n, static_cast<long long>(mean + 10.0 * sd + 30.0));
    out.offset = static_cast<int>(lo);
    out.w.resize(static_cast<std::size_t>(hi - lo + 1));
    const double logp = std::log(p), log1p_ = std::log1p(-p);
    const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
    double total = 0.0;
    for (long long k = lo; k <= hi; ++k) {
        const double lg = lgn - std::lgamma(static_cast<double>(k) + 1.0) -
                          std::lgamma(static_cast<double>(n - k) + 1.0) +
                          static_cast<double>(k) * logp + static_cast<double>(n - k) * log1p_;
        const double v = std::exp(lg);
        out.w[static_cast<std::size_t>(k - lo)] = v;
        total += v;
    }
    out.dropped = std::max(0.0, 1.0 - total);
    return out;
}

double windowed_entropy_bits(const WindowedPmf& pmf) {
    return pmf_entropy_bits(std::span<const double>(pmf.w.data(), pmf.w.size()));
}

}  // namespace ttcomp
