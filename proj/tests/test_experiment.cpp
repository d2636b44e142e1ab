// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <map>

#include "interfersim/experiment/builders.hpp"
#include "interfersim/experiment/run.hpp"
#include "oracle/first_quantized_oracle.hpp"
#include "support/random_graphs.hpp"

using namespace interfersim;
using Catch::Approx;

namespace {

double half_angle_sin2(double theta) {
    const double s = std::sin(theta / 2);
    return s * s;
}
double half_angle_cos2(double theta) {
    const double c = std::cos(theta / 2);
    return c * c;
}

std::vector<double> theta_grid(size_t points) {
    std::vector<double> grid(points);
    for (size_t i = 0; i < points; ++i) {
        grid[i] = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return grid;
}

std::map<std::string, double> by_pattern(const OutcomeDistribution& dist) {
    std::map<std::string, double> out;
    for (const auto& e : dist.entries()) out[e.pattern.render()] = e.probability;
    return out;
}

// engine distribution keyed like the oracle output (click 0/1, computational
// 0/1, joint plus=0/minus=1/null=2)
std::map<std::vector<uint8_t>, double> coded(const OutcomeDistribution& dist) {
    std::map<std::vector<uint8_t>, double> out;
    for (const auto& e : dist.entries()) {
        std::vector<uint8_t> codes;
        for (size_t i = 0; i < e.pattern.outcomes().size(); ++i) {
            switch (e.pattern.outcomes()[i]) {
                case Outcome::Silent:
                case Outcome::Pristine:
                case Outcome::Plus:
                    codes.push_back(0);
                    break;
                case Outcome::Clicked:
                case Outcome::Scattered:
                case Outcome::Minus:
                    codes.push_back(1);
                    break;
                case Outcome::Null:
                    codes.push_back(2);
                    break;
            }
        }
        out[codes] += e.probability;
    }
    return out;
}

double oracle_distance(const ExperimentGraph& g) {
    auto engine = coded(run(g));
    std::map<std::vector<uint8_t>, double> reference;
    for (const auto& o : oracle::OracleRunner(g).joint_distribution()) {
        reference[o.codes] += o.probability;
    }
    double worst = 0.0;
    for (const auto& [codes, p] : engine) {
        auto it = reference.find(codes);
        worst = std::max(worst, std::abs(p - (it == reference.end() ? 0.0 : it->second)));
    }
    for (const auto& [codes, p] : reference) {
        if (!engine.count(codes)) worst = std::max(worst, p);
    }
    return worst;
}

}  // namespace

TEST_CASE("builders produce valid graphs and agree structurally") {
    auto part_a = build_part_a(0.3, 0.1, 0.0);
    auto part_b = build_part_b(0.3, 0.1);
    REQUIRE(!has_errors(part_a.validate()));
    REQUIRE(!has_errors(part_b.validate()));

    SECTION("removing the non-absorbing detectors turns A into B") {
        auto stripped = part_a;
        stripped.ndetectors.clear();
        stripped.ancillas.clear();
        REQUIRE(stripped == part_b);
    }
    SECTION("warnings are absent: every mode is referenced") {
        REQUIRE(part_a.validate().empty());
        REQUIRE(part_b.validate().empty());
    }
}

TEST_CASE("pre-detection state matches the four-branch coincidence form") {
    const double theta1 = 0.9;
    const double theta2 = 0.25;
    const double theta = theta1 - theta2;
    auto state = pre_detection_state(build_part_a(theta1, theta2, 0.0));

    // mode bits: a1=1 b1=2 a2=4 b2=8 c=16 f=32 d=64 e=128; records M=1 N=2
    const BasisConfig cd01{80, 2}, cd10{80, 1}, ce01{144, 2}, ce10{144, 1};
    const BasisConfig cf00{48, 0}, de11{192, 3};

    for (const auto& config : {cd01, cd10, ce01, ce10}) {
        REQUIRE(std::abs(state.amplitude(config)) == Approx(0.25).margin(1e-12));
    }
    REQUIRE(std::abs(state.amplitude(cf00)) == Approx(0.5).margin(1e-12));
    REQUIRE(std::abs(state.amplitude(de11)) == Approx(0.5).margin(1e-12));
    // branch phases: d-pair -e^{i theta}, e-pair +e^{i theta}
    REQUIRE(std::abs(state.amplitude(cd10) / state.amplitude(cd01) + std::polar(1.0, theta)) <
            1e-12);
    REQUIRE(std::abs(state.amplitude(ce10) / state.amplitude(ce01) - std::polar(1.0, theta)) <
            1e-12);
}

TEST_CASE("full click/readout distribution of the marked interferometer") {
    const double theta1 = 1.7;
    const double theta2 = 0.45;
    const double theta = theta1 - theta2;
    auto dist = run(build_part_a(theta1, theta2, 0.0));
    auto p = by_pattern(dist);

    REQUIRE(p.at("C_null") == Approx(0.25).margin(1e-12));
    REQUIRE(p.at("DE_null") == Approx(0.25).margin(1e-12));
    REQUIRE(p.at("CD_plus") == Approx(half_angle_sin2(theta) / 8).margin(1e-12));
    REQUIRE(p.at("CD_minus") == Approx(half_angle_cos2(theta) / 8).margin(1e-12));
    REQUIRE(p.at("CE_plus") == Approx(half_angle_cos2(theta) / 8).margin(1e-12));
    REQUIRE(p.at("CE_minus") == Approx(half_angle_sin2(theta) / 8).margin(1e-12));
    REQUIRE(p.at("D_plus") == Approx(half_angle_cos2(theta) / 8).margin(1e-12));
    REQUIRE(p.at("E_plus") == Approx(half_angle_sin2(theta) / 8).margin(1e-12));
    REQUIRE(dist.total() == Approx(1.0).margin(1e-12));
}

TEST_CASE("which-path marking makes the coincidence marginals flat") {
    for (const double theta : theta_grid(25)) {
        auto dist = run(build_part_a(theta, 0.0, 0.0));
        auto coincident = post_select(dist, Condition::parse("C").matcher(dist.schema(), 2));
        REQUIRE(coincident.probability_of([](const ClickPattern& p) { return p.clicked("D"); }) ==
                Approx(0.5).margin(1e-12));
        REQUIRE(coincident.probability_of([](const ClickPattern& p) { return p.clicked("E"); }) ==
                Approx(0.5).margin(1e-12));
    }
}

TEST_CASE("plus/minus readout conditional on C and D recovers the fringe") {
    for (const double theta : theta_grid(13)) {
        auto dist = run(build_part_a(theta, 0.0, 0.0));
        auto given_cd = post_select(dist, Condition::parse("C,D").matcher(dist.schema(), 2));
        const double p_minus = given_cd.probability_of(
            [](const ClickPattern& p) { return p.outcome_of("B1B2") == Outcome::Minus; });
        const double p_plus = given_cd.probability_of(
            [](const ClickPattern& p) { return p.outcome_of("B1B2") == Outcome::Plus; });
        REQUIRE(p_minus == Approx(half_angle_cos2(theta)).margin(1e-12));
        REQUIRE(p_plus == Approx(half_angle_sin2(theta)).margin(1e-12));
    }
}

TEST_CASE("equal phase shifts behave like zero phase difference") {
    auto dist = run(build_part_a(0.4, 0.4, 0.0));
    auto given_cd = post_select(dist, Condition::parse("C,D").matcher(dist.schema(), 2));
    REQUIRE(given_cd.probability_of([](const ClickPattern& p) {
                return p.outcome_of("B1B2") == Outcome::Minus;
            }) == Approx(1.0).margin(1e-12));
}

TEST_CASE("unmarked interferometer shows the fringe directly in coincidences") {
    const double theta1 = 2.3;
    const double theta2 = 0.8;
    const double theta = theta1 - theta2;
    auto dist = run(build_part_b(theta1, theta2));
    auto p = by_pattern(dist);

    REQUIRE(p.at("C") == Approx(0.25).margin(1e-12));
    REQUIRE(p.at("DE") == Approx(0.25).margin(1e-12));
    REQUIRE(p.at("CD") == Approx(half_angle_sin2(theta) / 4).margin(1e-12));
    REQUIRE(p.at("CE") == Approx(half_angle_cos2(theta) / 4).margin(1e-12));
    REQUIRE(p.at("D") == Approx(half_angle_cos2(theta) / 4).margin(1e-12));
    REQUIRE(p.at("E") == Approx(half_angle_sin2(theta) / 4).margin(1e-12));

    SECTION("coincidence conditionals are complementary half-angle fringes") {
        auto coincident = post_select(dist, Condition::parse("C").matcher(dist.schema(), 2));
        const double p_d =
            coincident.probability_of([](const ClickPattern& p) { return p.clicked("D"); });
        const double p_e =
            coincident.probability_of([](const ClickPattern& p) { return p.clicked("E"); });
        REQUIRE(p_d + p_e == Approx(1.0).margin(1e-12));
        REQUIRE(p_d == Approx(half_angle_sin2(theta)).margin(1e-12));
        REQUIRE(p_e == Approx(half_angle_cos2(theta)).margin(1e-12));
    }
}

TEST_CASE("zero phase difference sends the coincidence partner to one port") {
    auto dist = run(build_part_b(0.0, 0.0));
    auto coincident = post_select(dist, Condition::parse("C").matcher(dist.schema(), 2));
    REQUIRE(coincident.probability_of([](const ClickPattern& p) { return p.clicked("E"); }) ==
            Approx(1.0).margin(1e-12));
    REQUIRE(coincident.probability_of([](const ClickPattern& p) { return p.clicked("D"); }) ==
            0.0);
}

TEST_CASE("post-selection basics") {
    auto dist = run(build_part_b(1.2, 0.3));
    SECTION("a condition matching everything changes nothing") {
        auto same = post_select(dist, [](const ClickPattern&) { return true; });
        REQUIRE(total_variation(dist, same) < 1e-15);
    }
    SECTION("zero-probability conditions are domain errors") {
        REQUIRE_THROWS_AS(post_select(dist,
                                      [](const ClickPattern& p) {
                                          return p.clicked("C") && p.clicked("D") &&
                                                 p.clicked("E");
                                      }),
                          std::invalid_argument);
    }
}

TEST_CASE("moving the record readout before the clicks changes nothing") {
    auto base = build_part_a(0.9, 0.2, 0.0);
    auto early = base;
    for (auto& nd : early.ndetectors) nd.readout_time = 8;  // before C, D, E at 9, 10, 11
    REQUIRE(!has_errors(early.validate()));
    REQUIRE(total_variation(run(base), run(early)) < 1e-12);
}

TEST_CASE("sweep over the unmarked interferometer fits the half-angle law") {
    SweepConfig config;
    config.param = SweepParam::Theta1;
    config.grid = theta_grid(25);
    config.condition = Condition::parse("C");
    auto table = sweep(build_part_b(0.0, 0.0), config);

    REQUIRE(table.columns.size() == 2);
    // canonical pattern order puts CE before CD
    REQUIRE(table.columns[0] == "E_given_C");
    REQUIRE(table.columns[1] == "D_given_C");
    REQUIRE(table.thetas.size() == 25);
    for (size_t i = 0; i < table.thetas.size(); ++i) {
        const double theta = table.thetas[i];
        REQUIRE(std::abs(table.values[i][1] - half_angle_sin2(theta)) < 1e-12);
        REQUIRE(std::abs(table.values[i][0] - half_angle_cos2(theta)) < 1e-12);
        REQUIRE(table.values[i][0] + table.values[i][1] == Approx(1.0).margin(1e-12));
    }
    REQUIRE(table.graph_hash.size() == 16);
    REQUIRE(table.convention == kConventionId);
}

TEST_CASE("sweep of the marked interferometer keeps the marginals constant") {
    SweepConfig config;
    config.param = SweepParam::Theta1;
    config.grid = theta_grid(25);
    auto table = sweep(build_part_a(0.0, 0.0, 0.0), config);

    const auto column = [&](const std::string& name) {
        for (size_t j = 0; j < table.columns.size(); ++j) {
            if (table.columns[j] == name) return j;
        }
        throw std::runtime_error("missing column " + name);
    };
    const size_t cd_plus = column("CD_plus");
    const size_t cd_minus = column("CD_minus");
    for (const auto& row : table.values) {
        REQUIRE(row[cd_plus] + row[cd_minus] == Approx(0.125).margin(1e-12));
    }

    SECTION("the minus conditional column has unit visibility") {
        std::vector<double> minus_given_cd;
        for (const auto& row : table.values) {
            minus_given_cd.push_back(row[cd_minus] / (row[cd_plus] + row[cd_minus]));
        }
        REQUIRE(visibility(minus_given_cd) == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("sweep mechanics") {
    SECTION("single-point grid gives one row") {
        SweepConfig config;
        config.grid = {0.7};
        auto table = sweep(build_part_b(0.0, 0.1), config);
        REQUIRE(table.thetas.size() == 1);
        REQUIRE(table.values.size() == 1);
    }
    SECTION("empty grid is rejected") {
        REQUIRE_THROWS_AS(sweep(build_part_b(0.0, 0.0), SweepConfig{}), std::invalid_argument);
    }
    SECTION("theta2 sweeps the second phase statement") {
        SweepConfig config;
        config.param = SweepParam::Theta2;
        config.grid = {0.9};
        config.condition = Condition::parse("C");
        auto table = sweep(build_part_b(0.0, 0.0), config);
        // theta = theta1 - theta2 = -0.9
        REQUIRE(std::abs(table.values[0][1] - half_angle_sin2(-0.9)) < 1e-12);
    }
    SECTION("results are independent of the worker count") {
        SweepConfig config;
        config.grid = theta_grid(9);
        config.condition = Condition::parse("C");
        config.threads = 1;
        auto serial = sweep(build_part_b(0.0, 0.0), config);
        config.threads = 4;
        auto parallel = sweep(build_part_b(0.0, 0.0), config);
        REQUIRE(serial.columns == parallel.columns);
        for (size_t i = 0; i < serial.values.size(); ++i) {
            REQUIRE(serial.values[i] == parallel.values[i]);
        }
    }
}

TEST_CASE("visibility") {
    REQUIRE(visibility(std::vector<double>{0.3, 0.3, 0.3}) == 0.0);
    std::vector<double> fringe;
    for (const double theta : theta_grid(25)) fringe.push_back(half_angle_cos2(theta));
    REQUIRE(visibility(fringe) == Approx(1.0).margin(1e-12));
    REQUIRE_THROWS_AS(visibility(std::vector<double>{0.0, 0.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(visibility(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("collapse-at-click and unitary-deferred pipelines are equivalent") {
    REQUIRE(compare_models(build_part_a(0.3, 0.1, 0.0)) < 1e-12);
    REQUIRE(compare_models(build_part_a(1.9, 0.6, 0.5)) < 1e-12);
    REQUIRE(compare_models(build_part_a(0.8, 0.0, 0.0, ReadoutBasis::Computational)) < 1e-12);
    REQUIRE(compare_models(build_part_b(0.3, 0.1)) < 1e-12);

    SECTION("and on seeded random graphs") {
        double worst = 0.0;
        for (uint64_t seed = 1; seed <= 30; ++seed) {
            auto g = interfersim::testing::random_graph(seed);
            REQUIRE(!has_errors(g.validate()));
            worst = std::max(worst, compare_models(g));
        }
        REQUIRE(worst < 1e-12);
    }
}

TEST_CASE("engine matches the labeled-particle reference evaluator") {
    REQUIRE(oracle_distance(build_part_a(0.7, 0.2, 0.0)) < 1e-12);
    REQUIRE(oracle_distance(build_part_a(0.7, 0.2, 0.5)) < 1e-12);
    REQUIRE(oracle_distance(build_part_a(1.4, 0.2, 0.0, ReadoutBasis::Computational)) < 1e-12);
    REQUIRE(oracle_distance(build_part_b(1.1, 0.4)) < 1e-12);

    SECTION("also on seeded random graphs") {
        for (uint64_t seed = 100; seed < 120; ++seed) {
            REQUIRE(oracle_distance(interfersim::testing::random_graph(seed)) < 1e-12);
        }
    }
}

TEST_CASE("sampling is reproducible and statistically sane") {
    ExperimentGraph g;
    g.modes = {{"g"}, {"h"}};
    g.sources = {{"S", "g"}};
    g.elements = {BeamSplitterDecl{"BS", "g", "h", "g", "h", 1}};
    g.adetectors = {{"G", "g", 2}, {"H", "h", 3}};
    auto dist = run(g);
    REQUIRE(dist.entries().size() == 2);

    SECTION("fixed seeds reproduce counts exactly") {
        auto a = sample(dist, 1000, 42);
        auto b = sample(dist, 1000, 42);
        REQUIRE(a == b);
        REQUIRE(a[0] + a[1] == 1000);
    }
    SECTION("a fair split stays within five sigma") {
        const uint64_t shots = 100000;
        auto counts = sample(dist, shots, 12345);
        const double sigma = std::sqrt(static_cast<double>(shots) * 0.25);
        REQUIRE(std::abs(static_cast<double>(counts[0]) - 50000.0) <= 5 * sigma);
        REQUIRE(std::abs(static_cast<double>(counts[1]) - 50000.0) <= 5 * sigma);
    }
    SECTION("a deterministic distribution puts every shot on one pattern") {
        ExperimentGraph one;
        one.modes = {{"x"}};
        one.sources = {{"S", "x"}};
        one.adetectors = {{"X", "x", 1}};
        auto d = run(one);
        auto counts = sample(d, 500, 7);
        REQUIRE(counts == std::vector<uint64_t>{500});
    }
    SECTION("at least one shot is required") {
        REQUIRE_THROWS_AS(sample(dist, 0, 1), std::invalid_argument);
    }
}

TEST_CASE("sources-only graphs run to the trivial distribution") {
    ExperimentGraph g;
    g.modes = {{"x"}};
    g.sources = {{"S", "x"}};
    auto dist = run(g);
    REQUIRE(dist.entries().size() == 1);
    REQUIRE(dist.entries()[0].probability == Approx(1.0));
}
