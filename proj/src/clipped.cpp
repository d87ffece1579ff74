#include "ttcomp/clipped.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "ttcomp/math_util.hpp"

namespace ttcomp {

namespace {

std::vector<std::size_t> box_strides(const std::vector<int>& theta, std::size_t cap) {
    std::vector<std::size_t> stride(theta.size());
    std::size_t size = 1;
    for (std::size_t l = 0; l < theta.size(); ++l) {
        if (theta[l] < 0) throw std::invalid_argument("clipped box: negative threshold");
        stride[l] = size;
        const std::size_t w = static_cast<std::size_t>(theta[l]) + 1;
        if (size > cap / w) throw ResourceError("clipped box exceeds state cap");
        size *= w;
    }
    return stride;
}

std::size_t box_total(const std::vector<int>& theta) {
    std::size_t size = 1;
    for (int t : theta) size *= static_cast<std::size_t>(t) + 1;
    return size;
}

}  // namespace

std::size_t ClippedDistribution::box_index(std::span<const int> clipped) const {
    std::size_t idx = 0, stride = 1;
    for (std::size_t l = 0; l < theta.size(); ++l) {
        if (clipped[l] < 0 || clipped[l] > theta[l])
            throw std::invalid_argument("ClippedDistribution: point outside box");
        idx += static_cast<std::size_t>(clipped[l]) * stride;
        stride *= static_cast<std::size_t>(theta[l]) + 1;
    }
    return idx;
}

std::vector<int> ClippedDistribution::box_point(std::size_t index) const {
    std::vector<int> c(theta.size());
    for (std::size_t l = 0; l < theta.size(); ++l) {
        const std::size_t w = static_cast<std::size_t>(theta[l]) + 1;
        c[l] = static_cast<int>(index % w);
        index /= w;
    }
    return c;
}

std::vector<double> ClippedDistribution::marginal(int coordinate) const {
    std::vector<double> m(static_cast<std::size_t>(theta.at(coordinate)) + 1, 0.0);
    for (std::size_t idx = 0; idx < prob.size(); ++idx) {
        std::size_t rest = idx;
        for (int l = 0; l < coordinate; ++l) rest /= static_cast<std::size_t>(theta[l]) + 1;
        m[rest % (static_cast<std::size_t>(theta[coordinate]) + 1)] += prob[idx];
    }
    return m;
}

ClippedDistribution clipped_type_distribution(const SourceModel& src, const std::vector<int>& theta,
                                              const std::optional<std::vector<int>>& initial,
                                              std::size_t state_cap) {
    if (static_cast<int>(theta.size()) != src.q())
        throw std::invalid_argument("clipped_type_distribution: theta length must equal q");
    const std::vector<std::size_t> stride = box_strides(theta, state_cap);
    const std::size_t size = box_total(theta);

    ClippedDistribution dist;
    dist.theta = theta;
    dist.prob.assign(size, 0.0);

    std::size_t start = 0;
    if (initial) {
        if (initial->size() != theta.size())
            throw std::invalid_argument("clipped_type_distribution: initial counts length must equal q");
        start = dist.box_index(*initial);
    }
    dist.prob[start] = 1.0;

    // Per-symbol transition: coordinate l moves up one unless already at
    // theta_l. The coordinate value at an index is recovered via strides.
    std::vector<double> next(size);
    for (int i = 0; i < src.sensor_count(); ++i) {
        const auto& pmf = src.pmf(i);
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t idx = 0; idx < size; ++idx) {
            const double w = dist.prob[idx];
            if (w == 0.0) continue;
            for (int v = 0; v < src.q(); ++v) {
                const double pv = pmf[v];
                if (pv == 0.0) continue;
                const std::size_t wv = static_cast<std::size_t>(theta[v]) + 1;
                const std::size_t cv = (idx / stride[v]) % wv;
                const std::size_t to = (static_cast<int>(cv) < theta[v]) ? idx + stride[v] : idx;
                next[to] += w * pv;
            }
        }
        dist.prob.swap(next);
    }

    double total = 0.0;
    for (double x : dist.prob) total += x;
    if (std::abs(total - 1.0) > 1e-10)
        throw std::runtime_error("clipped_type_distribution: probabilities lost mass");
    return dist;
}

double function_entropy(const TypeThresholdFunction& f, const SourceModel& src,
                        const std::optional<std::vector<int>>& conditioning_sensors,
                        std::size_t state_cap) {
    if (f.q() != src.q()) throw std::invalid_argument("function_entropy: alphabet mismatch");
    const int m = src.sensor_count();

    auto label_entropy = [&](const ClippedDistribution& dist) {
        // Pushforward through the reducer table; labels keyed by table index
        // of their first pre-image is not enough (distinct clipped points can
        // share labels), so accumulate by label value.
        std::map<std::string, double> acc;
        for (std::size_t idx = 0; idx < dist.prob.size(); ++idx) {
            if (dist.prob[idx] == 0.0) continue;
            acc[label_to_string(f.table()[idx])] += dist.prob[idx];
        }
        double h = 0.0;
        for (const auto& [_, p] : acc) h += xlog2_inv(p);
        return h;
    };

    if (!conditioning_sensors || conditioning_sensors->empty()) {
        return label_entropy(clipped_type_distribution(src, f.theta(), std::nullopt, state_cap));
    }

    std::vector<bool> conditioned(m, false);
    for (int i : *conditioning_sensors) {
        if (i < 0 || i >= m) throw std::invalid_argument("function_entropy: conditioning sensor out of range");
        if (conditioned[i]) throw std::invalid_argument("function_entropy: duplicate conditioning sensor");
        conditioned[i] = true;
    }
    std::vector<int> rest;
    for (int i = 0; i < m; ++i)
        if (!conditioned[i]) rest.push_back(i);

    const ClippedDistribution cond =
        clipped_type_distribution(src.restricted(*conditioning_sensors), f.theta(), std::nullopt, state_cap);
    if (rest.empty()) {
        // Everything observed: the function value is determined.
        return 0.0;
    }

    const SourceModel inner = src.restricted(rest);
    double h = 0.0;
    for (std::size_t idx = 0; idx < cond.prob.size(); ++idx) {
        const double w = cond.prob[idx];
        if (w == 0.0) continue;
        const std::vector<int> seed = cond.box_point(idx);
        h += w * label_entropy(clipped_type_distribution(inner, f.theta(), seed, state_cap));
    }
    return h;
}

}  // namespace ttcomp
