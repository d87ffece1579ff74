#pragma once

// Small numeric helpers shared across the library. All entropies are in bits.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ttcomp {

inline constexpr double kPi = 3.14159265358979323846;

// Thrown when a request would exceed a configured state-space or table cap.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// log2 clipped at zero: log2p(x) = max(log2(x), 0).
inline double log2p(double x) {
    if (x <= 1.0) return 0.0;
    return std::log2(x);
}

// x*log2(1/x) with the 0*log(0) = 0 convention.
inline double xlog2_inv(double x) {
    if (x <= 0.0) return 0.0;
    return -x * std::log2(x);
}

// Binary entropy in bits.
inline double h2(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("h2: p outside [0,1]");
    return xlog2_inv(p) + xlog2_inv(1.0 - p);
}

// Shannon entropy in bits of a (sub)probability vector. Negative entries
// below -1e-12 are rejected; tiny negatives from roundoff are treated as 0.
inline double pmf_entropy_bits(std::span<const double> w) {
    double h = 0.0;
    for (double x : w) {
        if (x < -1e-12) throw std::invalid_argument("pmf_entropy_bits: negative mass");
        h += xlog2_inv(x);
    }
    return h;
}

inline double pmf_entropy_bits(const std::vector<double>& w) {
    return pmf_entropy_bits(std::span<const double>(w.data(), w.size()));
}

// Validates a probability vector: entries in [0,1], sums to 1 within tol.
inline void check_pmf(std::span<const double> w, double tol, const std::string& what) {
    double s = 0.0;
    for (double x : w) {
        if (!(x >= -1e-15) || !(x <= 1.0 + 1e-12))
            throw std::invalid_argument(what + ": entry outside [0,1]");
        s += x;
    }
    if (std::abs(s - 1.0) > tol)
        throw std::invalid_argument(what + ": does not sum to 1 (got " + std::to_string(s) + ")");
}

// dB to linear power. 20 dB -> 100.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace ttcomp
