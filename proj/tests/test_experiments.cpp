#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttcomp/descriptions.hpp"
#include "ttcomp/experiments.hpp"
#include "ttcomp/partition.hpp"
#include "ttcomp/rates.hpp"
#include "ttcomp/source_model.hpp"
#include "ttcomp/type_threshold.hpp"

using namespace ttcomp;
using nlohmann::json;

namespace {

// Cell (row, col) of a CSV body, header excluded.
std::string csv_cell(const std::string& csv, int row, int col) {
    std::istringstream is(csv);
    std::string line;
    for (int r = -1; std::getline(is, line);) {
        if (++r == row + 1) {
            std::istringstream ls(line);
            std::string cell;
            for (int c = 0; std::getline(ls, cell, ',');)
                if (c++ == col) return cell;
        }
    }
    return {};
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("figure3 runner checks its own curves") {
    const json params = {{"m_grid", {4, 16}}};
    const auto res = run_figure3(params, 0);
    CHECK(res.pass);
    CHECK(res.summary.at("dp_cross_check_within_1e-9") == true);
    std::istringstream is(res.csv);
    std::string header;
    std::getline(is, header);
    CHECK(header ==
          "sensor_count,beta,entropy_bits_size_1,entropy_bits_size_sqrt,entropy_bits_size_m,"
          "bound_bits");

    // Deterministic: a second run produces the identical file.
    CHECK(run_figure3(params, 0).csv == res.csv);
}

TEST_CASE("figure4 rates agree with a direct computation") {
    // The monotonicity self-check belongs to the large-sensor regime.
    CHECK(run_figure4(json{{"m_grid", {100, 1000}}}, 0).pass);

    // A small grid for the value check; its curve is allowed to dip.
    const json params = {{"m_grid", {4, 16}}};
    const auto res = run_figure4(params, 0);

    // Recompute the first row by hand.
    const double beta = 0.5;
    const auto src = SourceModel::bernoulli(4, beta);
    const auto f = standard_function(StandardKind::maximum, 2);
    const std::vector<Partition> parts = {block_partition(4, 4), block_partition(4, 2)};
    const auto alloc = GaussianAllocation::uniform_time(f, parts, 100.0);
    const double mrgb =
        group_broadcast_rate_gaussian(f, src, parts, 100.0, alloc, ShiftPolicy::uniform_random())
            .rate;
    CHECK(std::stod(csv_cell(res.csv, 0, 3)) == doctest::Approx(mrgb).epsilon(1e-6));
    const double irr =
        round_robin_upper_bound(binary_max_round_robin_bits(4, beta), 4, 100.0).rate;
    CHECK(std::stod(csv_cell(res.csv, 0, 4)) == doctest::Approx(irr).epsilon(1e-6));
}

TEST_CASE("lemma sweep finds no violations") {
    const json params = {{"models", 40}, {"max_sensors", 400}};
    const auto res = run_lemma_sweep(params, 7);
    CHECK(res.pass);
    CHECK(res.summary.at("violations") == 0);
    CHECK(res.summary.at("models") == 40);
}

TEST_CASE("oracle check agrees between dynamic program and enumeration") {
    const json params = {{"models", 25}};
    const auto res = run_oracle_check(params, 11);
    CHECK(res.pass);
    CHECK(res.summary.at("failures") == 0);
    // The diff column really is tiny everywhere.
    std::istringstream is(res.csv);
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
        const auto pos = line.rfind(',');
        CHECK(std::stod(line.substr(pos + 1)) < 1e-9);
    }
}

TEST_CASE("rate table reports the measured power scaling honestly") {
    const json params = {{"m_grid", {100, 10000}}, {"power_grid", {100, 10000}}};
    const auto res = run_rate_table(params, 0);

    // The rates grow like (1/2) log2 P over the description entropy, which
    // pins the normalized ratio near 0.266 for the single-group layout; the
    // 0.4..0.6 target band asks for twice that, so the band check fails and
    // the runner reports it.
    CHECK_FALSE(res.summary.at("log_p_ratio_in_band_0.4_0.6").get<bool>());
    CHECK_FALSE(res.pass);
    const auto& failures = res.summary.at("log_p_band_failures");
    REQUIRE(failures.size() == 2);
    for (const auto& f : failures)
        CHECK(f.at("ratio_rate_over_log2p").get<double>() ==
              doctest::Approx(0.2657).epsilon(2e-3));

    // Constancy across sensor counts holds comfortably.
    CHECK(res.summary.at("constant_in_m_within_factor_4") == true);
    const double lo = res.summary.at("rates_vs_m_min").get<double>();
    const double hi = res.summary.at("rates_vs_m_max").get<double>();
    CHECK(hi <= 4.0 * lo);
}

TEST_CASE("simulate runner round-trips its configuration") {
    const json params = {{"draws", 500},
                         {"source", {{"bernoulli", 0.5}, {"sensors", 6}}},
                         {"function", {{"standard", "maximum"}, {"q", 2}}},
                         {"block_size", 2}};
    const auto res = run_simulate(params, 21);
    CHECK(res.pass);
    CHECK(res.summary.at("mismatch_count") == 0);
    CHECK(res.summary.at("draws") == 500);
    std::istringstream is(res.csv);
    std::string header;
    std::getline(is, header);
    CHECK(header == "value,position,group,skipped,received_sum_count");
}

TEST_CASE("dispatch and parameter validation") {
    ExperimentConfig cfg;
    cfg.kind = "no_such_kind";
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
    cfg.kind = "figure3";
    cfg.params = json::array();
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
    // At 16 sensors the sqrt partition already separates from both
    // degenerate block sizes, so a one-point grid passes every check.
    cfg.params = json{{"m_grid", {16}}};
    CHECK(run_experiment(cfg).pass);
}

TEST_CASE("worker count respects the environment override") {
    setenv("TTCOMP_WORKERS", "3", 1);
    CHECK(worker_count() == 3);
    setenv("TTCOMP_WORKERS", "0", 1);
    CHECK(worker_count() == 1);
    unsetenv("TTCOMP_WORKERS");
    CHECK(worker_count() >= 1);
}

}  // TEST_SUITE
