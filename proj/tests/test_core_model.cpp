#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "ttcomp/clipped.hpp"
#include "ttcomp/enumeration.hpp"
#include "ttcomp/math_util.hpp"
#include "ttcomp/pmf.hpp"
#include "ttcomp/rng.hpp"
#include "ttcomp/source_model.hpp"
#include "ttcomp/type_threshold.hpp"

using namespace ttcomp;

TEST_SUITE("core") {

TEST_CASE("type_vector tallies symbol frequencies") {
    std::vector<int> s1 = {0, 1, 1, 0, 2};
    CHECK(type_vector(s1, 3).counts == std::vector<int>{2, 2, 1});

    std::vector<int> s2 = {0, 0, 0};
    CHECK(type_vector(s2, 2).counts == std::vector<int>{3, 0});

    CHECK_THROWS_AS(type_vector(std::vector<int>{0, 3}, 3), std::invalid_argument);
    CHECK_THROWS_AS(type_vector(std::vector<int>{-1}, 3), std::invalid_argument);
}

TEST_CASE("type_vector matches an independent tally") {
    RngStream rng(101);
    for (int rep = 0; rep < 200; ++rep) {
        const int q = 2 + rng.next_index(5);
        const int m = 1 + rng.next_index(12);
        std::vector<int> symbols(m);
        for (int& s : symbols) s = rng.next_index(q);
        std::vector<int> tally(q, 0);
        for (int s : symbols) ++tally[s];
        CHECK(type_vector(symbols, q).counts == tally);
        CHECK(std::accumulate(tally.begin(), tally.end(), 0) == m);
    }
}

TEST_CASE("standard functions carry the right thresholds") {
    CHECK(standard_function(StandardKind::maximum, 4).theta() == std::vector<int>{0, 1, 1, 1});
    CHECK(standard_function(StandardKind::distinct_count, 3).theta() == std::vector<int>{1, 1, 1});
    CHECK(standard_function(StandardKind::avg_top, 4, 3).theta() == std::vector<int>{0, 3, 3, 3});
    CHECK(standard_function(StandardKind::frequency_indicator, 4, 2).theta() ==
          std::vector<int>{0, 0, 1, 0});
    CHECK(standard_function(StandardKind::heavy_hitters, 2, 2).theta() == std::vector<int>{2, 2});
}

TEST_CASE("evaluate on the standard instances") {
    const auto maxf = standard_function(StandardKind::maximum, 4);
    CHECK(evaluate(maxf, std::vector<int>{0, 3, 1}) == Label{std::int64_t{3}});
    CHECK(evaluate(maxf, std::vector<int>{0, 0}) == Label{std::int64_t{0}});

    const auto distinct = standard_function(StandardKind::distinct_count, 3);
    CHECK(evaluate(distinct, std::vector<int>{2, 2, 2}) == Label{std::int64_t{1}});
    CHECK(evaluate(distinct, std::vector<int>{0, 1, 2}) == Label{std::int64_t{3}});

    const auto heavy = standard_function(StandardKind::heavy_hitters, 2, 2);
    CHECK(evaluate(heavy, std::vector<int>{0, 0, 1}) == Label{std::vector<int>{0}});
    CHECK(evaluate(heavy, std::vector<int>{0, 0, 1, 1}) == Label{std::vector<int>{0, 1}});
    CHECK(evaluate(heavy, std::vector<int>{0, 1}) == Label{std::vector<int>{}});

    const auto avg = standard_function(StandardKind::avg_top, 3, 2);
    CHECK(evaluate(avg, std::vector<int>{0, 2, 1, 2}) == Label{SumCount{4, 2}});
    // The two largest of {1,0,0} are {1,0}: zeros pad and the denominator
    // stays at param.
    CHECK(evaluate(avg, std::vector<int>{1, 0, 0}) == Label{SumCount{1, 2}});
    CHECK(evaluate(avg, std::vector<int>{0, 0}) == Label{SumCount{0, 2}});

    const auto ind = standard_function(StandardKind::frequency_indicator, 4, 2);
    CHECK(evaluate(ind, std::vector<int>{2, 0}) == Label{std::int64_t{1}});
    CHECK(evaluate(ind, std::vector<int>{0, 1, 3}) == Label{std::int64_t{0}});
}

TEST_CASE("evaluate is permutation invariant") {
    RngStream rng(77);
    const std::vector<TypeThresholdFunction> fns = {
        standard_function(StandardKind::maximum, 4),
        standard_function(StandardKind::distinct_count, 4),
        standard_function(StandardKind::avg_top, 4, 2),
        standard_function(StandardKind::frequency_indicator, 4, 1),
        standard_function(StandardKind::heavy_hitters, 4, 2),
    };
    for (int rep = 0; rep < 1000; ++rep) {
        const auto& f = fns[rng.next_index(static_cast<int>(fns.size()))];
        const int m = 1 + rng.next_index(10);
        std::vector<int> symbols(m);
        for (int& s : symbols) s = rng.next_index(f.q());
        std::vector<int> shuffled = symbols;
        for (int i = m - 1; i > 0; --i)
            std::swap(shuffled[i], shuffled[rng.next_index(i + 1)]);
        CHECK(evaluate(f, symbols) == evaluate(f, shuffled));
    }
}

TEST_CASE("maximum ignores padding with zero symbols") {
    const auto f = standard_function(StandardKind::maximum, 5);
    RngStream rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        const int m = 1 + rng.next_index(8);
        std::vector<int> symbols(m);
        for (int& s : symbols) s = rng.next_index(5);
        std::vector<int> padded = symbols;
        padded.insert(padded.end(), 1 + rng.next_index(4), 0);
        CHECK(evaluate(f, symbols) == evaluate(f, padded));
    }
}

TEST_CASE("reduce agrees with direct evaluation through the clipped type") {
    RngStream rng(12);
    const std::vector<TypeThresholdFunction> fns = {
        standard_function(StandardKind::maximum, 3),
        standard_function(StandardKind::avg_top, 3, 2),
        standard_function(StandardKind::heavy_hitters, 3, 2),
    };
    for (int rep = 0; rep < 300; ++rep) {
        const auto& f = fns[rng.next_index(static_cast<int>(fns.size()))];
        const int m = 1 + rng.next_index(9);
        std::vector<int> symbols(m);
        for (int& s : symbols) s = rng.next_index(f.q());
        const auto clipped = f.clip(type_vector(symbols, f.q()));
        CHECK(f.reduce(clipped) == evaluate(f, symbols));
    }
}

TEST_CASE("box index and box point are inverse") {
    const auto f = standard_function(StandardKind::avg_top, 3, 2);  // box 1 x 3 x 3
    CHECK(f.box_size() == 9);
    for (std::size_t i = 0; i < f.box_size(); ++i) {
        const auto pt = f.box_point(i);
        CHECK(f.box_index(pt) == i);
        for (int l = 0; l < f.q(); ++l) CHECK(pt[l] <= f.theta()[l]);
    }
}

TEST_CASE("constructor validation") {
    // Table length must match the box volume.
    CHECK_THROWS_AS(TypeThresholdFunction(2, {1, 1}, {Label{std::int64_t{0}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(standard_function(StandardKind::avg_top, 16, 15), ResourceError);
    CHECK_THROWS_AS(standard_function(StandardKind::maximum, 1), std::invalid_argument);
}

TEST_CASE("source model builders and validation") {
    const auto src = SourceModel::bernoulli(3, 0.3);
    CHECK(src.q() == 2);
    CHECK(src.sensor_count() == 3);
    CHECK(src.pmf(0) == std::vector<double>{0.7, 0.3});
    CHECK(src.indicator_probs(1) == std::vector<double>{0.3, 0.3, 0.3});

    const auto mixed = SourceModel(3, {{0.2, 0.3, 0.5}, {1.0, 0.0, 0.0}});
    CHECK(mixed.indicator_probs(2) == std::vector<double>{0.5, 0.0});

    CHECK_THROWS_AS(SourceModel(2, {{0.5, 0.6}}), std::invalid_argument);
    CHECK_THROWS_AS(SourceModel(2, {{1.2, -0.2}}), std::invalid_argument);
    CHECK_THROWS_AS(SourceModel(1, {{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(SourceModel::bernoulli(2, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(SourceModel::iid(0, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("restriction keeps the selected sensors in order") {
    const auto src = SourceModel(2, {{0.9, 0.1}, {0.8, 0.2}, {0.7, 0.3}});
    const auto sub = src.restricted(std::vector<int>{2, 0});
    CHECK(sub.sensor_count() == 2);
    CHECK(sub.pmf(0) == std::vector<double>{0.7, 0.3});
    CHECK(sub.pmf(1) == std::vector<double>{0.9, 0.1});
    CHECK_THROWS_AS(src.restricted(std::vector<int>{3}), std::out_of_range);
}

TEST_CASE("sampling is seed deterministic and marginally correct") {
    const auto src = SourceModel::iid(4, {0.5, 0.25, 0.25});
    RngStream a(9), b(9);
    for (int t = 0; t < 50; ++t) CHECK(src.sample(a) == src.sample(b));

    // 3 sigma band on the value-1 indicator frequency of sensor 0.
    const int k = 20000;
    RngStream rng(42);
    int ones = 0;
    for (int t = 0; t < k; ++t)
        if (src.sample(rng)[0] == 1) ++ones;
    const double phat = double(ones) / k;
    const double sigma = std::sqrt(0.25 * 0.75 / k);
    CHECK(std::abs(phat - 0.25) < 3 * sigma);
}

TEST_CASE("clipped type distribution on two fair binary sensors") {
    const auto src = SourceModel::bernoulli(2, 0.5);
    const auto dist = clipped_type_distribution(src, {1, 1});
    REQUIRE(dist.prob.size() == 4);
    CHECK(dist.prob[dist.box_index(std::vector<int>{1, 0})] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(dist.prob[dist.box_index(std::vector<int>{1, 1})] == doctest::Approx(0.50).epsilon(1e-12));
    CHECK(dist.prob[dist.box_index(std::vector<int>{0, 1})] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(dist.prob[dist.box_index(std::vector<int>{0, 0})] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("all-zero thresholds give a point mass") {
    const auto src = SourceModel::iid(5, {0.4, 0.6});
    const auto dist = clipped_type_distribution(src, {0, 0});
    REQUIRE(dist.prob.size() == 1);
    CHECK(dist.prob[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("clipped distribution matches enumeration") {
    RngStream rng(314);
    std::vector<std::vector<double>> pmfs;
    for (int i = 0; i < 6; ++i) {
        std::vector<double> p(3);
        double s = 0.0;
        for (double& x : p) s += (x = rng.next_double() + 1e-3);
        for (double& x : p) x /= s;
        pmfs.push_back(p);
    }
    const SourceModel src(3, pmfs);
    const std::vector<int> theta = {1, 2, 1};
    const auto dist = clipped_type_distribution(src, theta);
    const auto brute = enumerate_clipped_distribution(src, theta);
    double total = 0.0;
    for (const auto& [point, p] : brute) {
        CHECK(dist.prob[dist.box_index(point)] == doctest::Approx(p).epsilon(0).scale(1).epsilon(1e-10));
        total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("clipped marginals match the clipped sum of indicators") {
    const auto src = SourceModel(3, {{0.5, 0.3, 0.2}, {0.1, 0.6, 0.3}, {0.25, 0.25, 0.5}, {0.9, 0.05, 0.05}});
    const std::vector<int> theta = {2, 1, 3};
    const auto dist = clipped_type_distribution(src, theta);
    for (int l = 0; l < 3; ++l) {
        const auto probs = src.indicator_probs(l);
        const auto sum_pmf = poisson_binomial_pmf(probs);
        std::vector<double> clipped(theta[l] + 1, 0.0);
        for (int b = 0; b < static_cast<int>(sum_pmf.size()); ++b)
            clipped[std::min(b, theta[l])] += sum_pmf[b];
        const auto got = dist.marginal(l);
        REQUIRE(got.size() == clipped.size());
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(got[i] == doctest::Approx(clipped[i]).epsilon(1e-10));
    }
}

TEST_CASE("function entropy on frozen instances") {
    const auto maxf = standard_function(StandardKind::maximum, 2);
    const auto src = SourceModel::bernoulli(2, 0.5);
    CHECK(function_entropy(maxf, src) == doctest::Approx(h2(0.25)).epsilon(1e-12));

    const auto distinct = standard_function(StandardKind::distinct_count, 2);
    CHECK(function_entropy(distinct, SourceModel::iid(2, {0.5, 0.5})) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // Conditioning on every sensor removes all uncertainty.
    CHECK(function_entropy(maxf, src, std::vector<int>{0, 1}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("function entropy matches enumeration with and without conditioning") {
    RngStream rng(2718);
    for (int rep = 0; rep < 25; ++rep) {
        const int m = 2 + rng.next_index(4);
        const int q = 2 + rng.next_index(2);
        std::vector<std::vector<double>> pmfs;
        for (int i = 0; i < m; ++i) {
            std::vector<double> p(q);
            double s = 0.0;
            for (double& x : p) s += (x = rng.next_double() + 1e-3);
            for (double& x : p) x /= s;
            pmfs.push_back(p);
        }
        const SourceModel src(q, pmfs);
        const auto f = rng.next_index(2) == 0 ? standard_function(StandardKind::maximum, q)
                                              : standard_function(StandardKind::distinct_count, q);
        CHECK(function_entropy(f, src) ==
              doctest::Approx(enumerate_function_entropy(f, src)).epsilon(1e-9));

        std::vector<int> cond;
        for (int i = 0; i < m; ++i)
            if (rng.next_index(2) == 0) cond.push_back(i);
        const double dp = function_entropy(f, src, cond);
        const double brute = enumerate_function_entropy(f, src, cond);
        CHECK(dp == doctest::Approx(brute).epsilon(1e-9));
        // Conditioning can only reduce entropy.
        CHECK(dp <= function_entropy(f, src) + 1e-9);
    }
}

TEST_CASE("state cap rejects oversized boxes") {
    const auto src = SourceModel::iid(4, {0.5, 0.5});
    CHECK_THROWS_AS(clipped_type_distribution(src, {1, 1}, std::nullopt, 2), ResourceError);
}

}  // TEST_SUITE
