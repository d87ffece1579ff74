#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "ttcomp/chain.hpp"
#include "ttcomp/descriptions.hpp"
#include "ttcomp/math_util.hpp"
#include "ttcomp/partition.hpp"
#include "ttcomp/pmf.hpp"
#include "ttcomp/rng.hpp"
#include "ttcomp/source_model.hpp"
#include "ttcomp/type_threshold.hpp"

using namespace ttcomp;

namespace {

std::vector<double> random_pmf(RngStream& rng, int q) {
    std::vector<double> p(q);
    double s = 0.0;
    for (double& x : p) s += (x = rng.next_double() + 1e-3);
    for (double& x : p) x /= s;
    return p;
}

}  // namespace

TEST_SUITE("descriptions") {

TEST_CASE("block partitions") {
    const auto p = block_partition(5, 2);
    REQUIRE(p.group_count() == 2);
    CHECK(p.groups[0] == std::vector<int>{0, 1});
    CHECK(p.groups[1] == std::vector<int>{2, 3, 4});

    const auto whole = block_partition(4, 4);
    REQUIRE(whole.group_count() == 1);
    CHECK(whole.groups[0] == std::vector<int>{0, 1, 2, 3});

    const auto singles = block_partition(3, 1);
    REQUIRE(singles.group_count() == 3);
    for (int g = 0; g < 3; ++g) CHECK(singles.groups[g] == std::vector<int>{g});

    CHECK_THROWS_AS(block_partition(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(block_partition(3, 4), std::invalid_argument);
}

TEST_CASE("partition validation") {
    Partition p;
    p.groups = {{0, 1}, {2}};
    CHECK_NOTHROW(p.validate(3));
    p.groups = {{0, 1}, {1, 2}};
    CHECK_THROWS_AS(p.validate(3), std::invalid_argument);  // overlap
    p.groups = {{0}, {2}};
    CHECK_THROWS_AS(p.validate(3), std::invalid_argument);  // hole
    p.groups = {{0, 1, 2}, {}};
    CHECK_THROWS_AS(p.validate(3), std::invalid_argument);  // empty group
    p.groups = {{0, 3}};
    CHECK_THROWS_AS(p.validate(2), std::invalid_argument);  // out of range
}

TEST_CASE("rotation reorders groups cyclically") {
    const auto p = block_partition(6, 2);
    const auto r = p.rotated(1);
    CHECK(r.groups[0] == p.groups[1]);
    CHECK(r.groups[1] == p.groups[2]);
    CHECK(r.groups[2] == p.groups[0]);
    CHECK(p.rotated(0).groups == p.groups);
    CHECK(p.rotated(3).groups == p.groups);  // full cycle
}

TEST_CASE("threshold partition groups until the sum crosses theta") {
    const std::vector<double> half(10, 0.5);
    const auto pairs = threshold_partition(half, 1);
    REQUIRE(pairs.group_count() == 5);
    for (int g = 0; g < 5; ++g)
        CHECK(pairs.groups[g] == std::vector<int>{2 * g, 2 * g + 1});
    CHECK_FALSE(pairs.tail_merged);

    // Total activity below theta collapses to a single group.
    const std::vector<double> light = {0.1, 0.1, 0.1};
    const auto single = threshold_partition(light, 1);
    REQUIRE(single.group_count() == 1);
    CHECK(single.groups[0] == std::vector<int>{0, 1, 2});
}

TEST_CASE("threshold partition interval sums stay in their bands") {
    RngStream rng(404);
    for (int rep = 0; rep < 200; ++rep) {
        const int m = 1 + rng.next_index(40);
        const int theta = 1 + rng.next_index(4);
        std::vector<double> probs(m);
        for (double& p : probs) p = rng.next_double();
        const auto part = threshold_partition(probs, theta);
        part.validate(m);
        const int j = part.group_count();
        double total = 0.0;
        for (double p : probs) total += p;
        if (total < theta) {
            CHECK(j == 1);
            continue;
        }
        for (int g = 0; g < j; ++g) {
            // Groups are consecutive index intervals.
            for (std::size_t i = 1; i < part.groups[g].size(); ++i)
                CHECK(part.groups[g][i] == part.groups[g][i - 1] + 1);
            double sum = 0.0;
            for (int i : part.groups[g]) sum += probs[i];
            if (g + 1 < j) {
                CHECK(sum >= theta);
                CHECK(sum < theta + 1.0);
            } else if (!part.tail_merged) {
                CHECK(sum >= theta);
                CHECK(sum < 2.0 * theta);
            }
        }
    }
}

TEST_CASE("chain law on two fair binary sensors") {
    const auto src = SourceModel::bernoulli(2, 0.5);
    const auto law = chain_law(src, 1, 1, block_partition(2, 1));
    REQUIRE(law.step_count() == 2);
    REQUIRE(law.state_pmfs.size() == 3);
    CHECK(law.state_pmfs[0] == std::vector<double>{1.0});
    CHECK(law.state_pmfs[1][0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(law.state_pmfs[1][1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(law.state_pmfs[2][0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(law.state_pmfs[2][1] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(law.below_mass[0] == doctest::Approx(1.0));
    CHECK(law.below_mass[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(law.below_mass[2] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("chain law invariants on random models") {
    RngStream rng(555);
    for (int rep = 0; rep < 100; ++rep) {
        const int m = 2 + rng.next_index(7);
        const int q = 2 + rng.next_index(3);
        std::vector<std::vector<double>> pmfs;
        for (int i = 0; i < m; ++i) pmfs.push_back(random_pmf(rng, q));
        const SourceModel src(q, pmfs);
        const int value = rng.next_index(q);
        const int theta = 1 + rng.next_index(3);
        const auto part = block_partition(m, 1 + rng.next_index(m));
        const auto law = chain_law(src, value, theta, part);

        REQUIRE(static_cast<int>(law.state_pmfs.size()) == law.step_count() + 1);
        CHECK(law.state_pmfs[0] == std::vector<double>{1.0});
        for (const auto& pmf : law.state_pmfs) {
            double s = 0.0;
            for (double x : pmf) {
                CHECK(x >= -1e-15);
                s += x;
            }
            CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
        }
        // U_m stochastically dominates U_{m-1}: tail sums only grow.
        for (int mstep = 1; mstep <= law.step_count(); ++mstep) {
            const auto& prev = law.state_pmfs[mstep - 1];
            const auto& cur = law.state_pmfs[mstep];
            for (int k = 0; k < static_cast<int>(std::max(prev.size(), cur.size())); ++k) {
                double tp = 0.0, tc = 0.0;
                for (int j = k; j < static_cast<int>(prev.size()); ++j) tp += prev[j];
                for (int j = k; j < static_cast<int>(cur.size()); ++j) tc += cur[j];
                CHECK(tc >= tp - 1e-10);
            }
        }
        // The gate closes per group, so the state can overshoot theta by at
        // most one group minus one, and only freezes from theta upward.
        int largest_group = 0;
        for (const auto& g : part.groups)
            largest_group = std::max(largest_group, static_cast<int>(g.size()));
        for (const auto& pmf : law.state_pmfs)
            CHECK(static_cast<int>(pmf.size()) <= theta + largest_group);
        // Mass at or above theta is frozen: it never moves between states.
        for (int mstep = 1; mstep <= law.step_count(); ++mstep) {
            const auto& prev = law.state_pmfs[mstep - 1];
            const auto& cur = law.state_pmfs[mstep];
            for (int k = theta; k < static_cast<int>(prev.size()); ++k)
                CHECK(cur[k] >= prev[k] - 1e-12);
        }

        // Final crossing probability equals the indicator-sum tail.
        const auto tail_pmf = poisson_binomial_pmf(src.indicator_probs(value));
        double tail = 0.0;
        for (int b = theta; b < static_cast<int>(tail_pmf.size()); ++b) tail += tail_pmf[b];
        CHECK(1.0 - law.below_mass.back() == doctest::Approx(tail).epsilon(1e-9));
    }
}

TEST_CASE("zero threshold freezes the chain at zero") {
    const auto src = SourceModel::bernoulli(3, 0.4);
    const auto law = chain_law(src, 1, 0, block_partition(3, 1));
    for (const auto& pmf : law.state_pmfs) {
        REQUIRE(pmf.size() == 1);
        CHECK(pmf[0] == doctest::Approx(1.0));
    }
    for (double b : law.below_mass) CHECK(b == 0.0);
}

TEST_CASE("shifting the chain equals rotating the partition") {
    RngStream rng(66);
    for (int rep = 0; rep < 50; ++rep) {
        const int m = 3 + rng.next_index(5);
        std::vector<std::vector<double>> pmfs;
        for (int i = 0; i < m; ++i) pmfs.push_back(random_pmf(rng, 2));
        const SourceModel src(2, pmfs);
        const auto part = block_partition(m, 2);
        const int d = rng.next_index(part.group_count());
        const auto a = chain_law(src, 1, 2, part, d);
        const auto b = chain_law(src, 1, 2, part.rotated(d), 0);
        REQUIRE(a.state_pmfs.size() == b.state_pmfs.size());
        for (std::size_t i = 0; i < a.state_pmfs.size(); ++i) {
            REQUIRE(a.state_pmfs[i].size() == b.state_pmfs[i].size());
            for (std::size_t k = 0; k < a.state_pmfs[i].size(); ++k)
                CHECK(a.state_pmfs[i][k] == doctest::Approx(b.state_pmfs[i][k]).epsilon(1e-14));
        }
    }
}

TEST_CASE("draw_shifts policies") {
    RngStream rng(1);
    const std::vector<int> counts = {3, 1, 4};
    const auto none = draw_shifts(ShiftPolicy::none(), counts, rng);
    CHECK(none == std::vector<int>{0, 0, 0});
    const auto fixed = draw_shifts(ShiftPolicy::fixed(5), counts, rng);
    CHECK(fixed == std::vector<int>{5 % 3, 0, 5 % 4});
    RngStream r1(9), r2(9);
    const auto u1 = draw_shifts(ShiftPolicy::uniform_random(), counts, r1);
    const auto u2 = draw_shifts(ShiftPolicy::uniform_random(), counts, r2);
    CHECK(u1 == u2);
    for (std::size_t l = 0; l < counts.size(); ++l) {
        CHECK(u1[l] >= 0);
        CHECK(u1[l] < counts[l]);
    }
}

TEST_CASE("sampled descriptions replay deterministically and clip correctly") {
    const auto src = SourceModel::iid(6, {0.4, 0.3, 0.3});
    const auto f = standard_function(StandardKind::avg_top, 3, 2);
    const std::vector<Partition> parts = {block_partition(6, 6), block_partition(6, 2),
                                          block_partition(6, 3)};
    const auto a = sample_descriptions(src, f, parts, ShiftPolicy::uniform_random(), 33, 200);
    const auto b = sample_descriptions(src, f, parts, ShiftPolicy::uniform_random(), 33, 200);
    CHECK(a.symbols == b.symbols);
    CHECK(a.shifts == b.shifts);
    CHECK(a.u == b.u);

    for (int t = 0; t < 200; ++t) {
        const auto counts = type_vector(a.symbols[t], 3).counts;
        for (int l = 0; l < 3; ++l)
            CHECK(a.clipped[l][t] == std::min(f.theta()[l], counts[l]));
    }
    // theta_0 = 0: no chain for value 0.
    CHECK(a.u[0].empty());
    // Chains are non-decreasing, freeze once they reach theta (possibly with
    // an overshoot from the crossing group), and clip back to the counter.
    for (int l = 1; l < 3; ++l) {
        const int theta = f.theta()[l];
        for (int t = 0; t < 200; ++t) {
            int prev = 0;
            for (std::size_t mstep = 0; mstep < a.u[l].size(); ++mstep) {
                const int cur = a.u[l][mstep][t];
                CHECK(cur >= prev);
                if (prev >= theta) CHECK(cur == prev);
                prev = cur;
            }
            CHECK(std::min(prev, theta) == a.clipped[l][t]);
        }
    }
}

TEST_CASE("sampled state frequencies track the chain law") {
    const int draws = 10000;
    const auto src = SourceModel::iid(8, {0.5, 0.5});
    const auto f = standard_function(StandardKind::maximum, 2);
    const std::vector<Partition> parts = {block_partition(8, 8), block_partition(8, 2)};
    const auto sample = sample_descriptions(src, f, parts, ShiftPolicy::none(), 7, draws);
    const auto law = chain_law(src, 1, 1, parts[1]);
    for (int mstep = 0; mstep < law.step_count(); ++mstep) {
        const int support = static_cast<int>(law.state_pmfs[mstep + 1].size());
        std::vector<int> hist(support, 0);
        for (int t = 0; t < draws; ++t) {
            const int u = sample.u[1][mstep][t];
            REQUIRE(u < support);
            ++hist[u];
        }
        for (int k = 0; k < support; ++k) {
            const double p = law.state_pmfs[mstep + 1][k];
            const double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) / draws);
            CHECK(std::abs(double(hist[k]) / draws - p) < 3.5 * sigma + 1e-9);
        }
    }
}

TEST_CASE("binary search walks the frozen interval schedule") {
    // Maximum 2 with q = 4: test 2 (hit), then 3 (miss), read lo = 2.
    const std::vector<int> symbols = {0, 2, 1, 2};
    const std::vector<Partition> stages(2, block_partition(4, 2));
    const auto res = binary_search_max_descriptions(symbols, 4, stages);
    CHECK(res.thresholds == std::vector<int>{2, 3});
    CHECK(res.outcomes == std::vector<int>{1, 0});
    CHECK(res.maximum == 2);

    const auto zero = binary_search_max_descriptions(std::vector<int>{0, 0, 0}, 4,
                                                     {block_partition(3, 3), block_partition(3, 3)});
    CHECK(zero.maximum == 0);
    CHECK(zero.outcomes == std::vector<int>{0, 0});
}

TEST_CASE("binary search stage count is ceil log2 q") {
    CHECK(binary_search_stage_count(2) == 1);
    CHECK(binary_search_stage_count(3) == 2);
    CHECK(binary_search_stage_count(4) == 2);
    CHECK(binary_search_stage_count(5) == 3);
    CHECK(binary_search_stage_count(16) == 4);
}

TEST_CASE("binary search recovers the maximum on random inputs") {
    RngStream rng(2024);
    const int reps = 10000;
    for (int rep = 0; rep < reps; ++rep) {
        const int q = std::vector<int>{4, 8, 16}[rng.next_index(3)];
        const int m = 1 + rng.next_index(32);
        std::vector<int> symbols(m);
        for (int& s : symbols) s = rng.next_index(q);
        const std::vector<Partition> stages(binary_search_stage_count(q),
                                            block_partition(m, std::max(1, m / 2)));
        const auto res = binary_search_max_descriptions(symbols, q, stages);
        REQUIRE(res.maximum == *std::max_element(symbols.begin(), symbols.end()));
    }
}

}  // TEST_SUITE
