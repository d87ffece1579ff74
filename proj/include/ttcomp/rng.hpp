#pragma once

// Seedable, splittable random stream. Sampling goes through explicit
// inverse-CDF walks so that replays are byte-identical across platforms
// (std::discrete_distribution makes no such guarantee).

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace ttcomp {

// SplitMix64 mix; used to derive independent child seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), gen_(mix64(seed)) {}

    // Independent child stream; children with distinct ids never collide
    // with the parent's own draw sequence.
    RngStream child(std::uint64_t stream_id) const {
        return RngStream(mix64(seed_ ^ (0xa0761d6478bd642fULL + stream_id)));
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    int next_index(int n) {
        if (n <= 0) throw std::invalid_argument("next_index: n must be positive");
        // Rejection sampling to avoid modulo bias.
        const std::uint64_t bound = ~std::uint64_t(0) - (~std::uint64_t(0) % static_cast<std::uint64_t>(n));
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= bound);
        return static_cast<int>(x % static_cast<std::uint64_t>(n));
    }

    // Categorical draw by CDF walk; pmf must sum to ~1.
    int next_categorical(std::span<const double> pmf) {
        double u = next_double();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < pmf.size(); ++i) {
            acc += pmf[i];
            if (u < acc) return static_cast<int>(i);
        }
        return static_cast<int>(pmf.size()) - 1;
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace ttcomp
