#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "fixtures.hpp"
#include "oracles.hpp"
#include "misalign/experiments.hpp"
#include "misalign/misalignment.hpp"

using namespace misalign;

namespace {

// Expected weighted score of a random population with unit conflict between
// distinct goals and weights uniform on [lo, hi]: P(distinct goals) * E[sqrt W]^2.
double random_population_expectation(std::size_t k, double lo, double hi)
{
    const double mean_root = oracle::simpson([](double w) { return std::sqrt(w); }, lo, hi) / (hi - lo);
    return (1.0 - 1.0 / double(k)) * mean_root * mean_root;
}

// Vehicle and pedestrian weights per area times the cross-pair fraction.
double carla_expectation(std::size_t vehicles, std::size_t agents, double conflict)
{
    const double n = double(agents);
    const double cross = 2.0 * double(vehicles) * double(agents - vehicles) / (n * (n - 1.0));
    double sum = 0.0;
    for (std::size_t j = 0; j < 8; ++j) sum += std::sqrt(carla_table.vehicle[j] * carla_table.pedestrian[j]);
    return conflict * cross * sum / 8.0;
}

const ExperimentCurve& find_curve(const std::vector<ExperimentCurve>& curves, const std::string& key)
{
    const auto it = std::find_if(curves.begin(), curves.end(), [&](const auto& c) { return c.series_key() == key; });
    REQUIRE(it != curves.end());
    return *it;
}

}  // namespace

TEST_CASE("mean and population std")
{
    const std::vector<double> values{2, 4, 4, 4, 5, 5, 7, 9};
    const auto [mean, std] = mean_and_std(values);
    CHECK(mean == 5.0);
    CHECK(std == 2.0);
    const std::vector<double> single{0.3};
    CHECK(mean_and_std(single).second == 0.0);
}

TEST_CASE("unit grid")
{
    const auto grid = defaults::unit_grid(4);
    CHECK(grid == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
}

TEST_CASE("three agents with three distinct goals are fully misaligned")
{
    const World w = fixtures::mutex_world(3, {1, 2, 3});
    CHECK(overall_misalignment(w, true).overall == 1.0);
    CHECK(evaluate_scenario(w).overall == 1.0);
}

TEST_CASE("random experiments are independent of the thread count")
{
    const std::vector<std::size_t> agents{3, 12, 51};
    const std::vector<std::size_t> areas{1, 2};
    ExperimentOptions one{5, 20, 1};
    ExperimentOptions four{5, 20, 4};
    const auto a = exp_varying_problem_areas(agents, areas, one);
    const auto b = exp_varying_problem_areas(agents, areas, four);
    REQUIRE(a.size() == b.size());
    for (std::size_t s = 0; s < a.size(); ++s) {
        CHECK(a[s].series_key() == b[s].series_key());
        for (std::size_t p = 0; p < a[s].points.size(); ++p) {
            CHECK(a[s].points[p].mean == b[s].points[p].mean);
            CHECK(a[s].points[p].std == b[s].points[p].std);
        }
    }
    ExperimentOptions other_seed{6, 20, 1};
    CHECK(exp_varying_problem_areas(agents, areas, other_seed)[0].points[2].mean != a[0].points[2].mean);
}

TEST_CASE("a single goal never conflicts")
{
    const std::vector<std::size_t> agents{3, 24};
    const std::vector<std::size_t> goals{1};
    const auto curves = exp_varying_goals(agents, goals, {1, 10, 1});
    for (const auto& point : curves[0].points) {
        CHECK(point.mean == 0.0);
        CHECK(point.std == 0.0);
    }
}

TEST_CASE("varying goals approaches (k-1)/k")
{
    const std::vector<std::size_t> agents{501};
    const std::vector<std::size_t> goals{2, 3, 4};
    const auto curves = exp_varying_goals(agents, goals, {0, 30, 1});
    for (std::size_t s = 0; s < goals.size(); ++s) {
        CHECK(curves[s].series_key() == "problem_areas=4;goals=" + std::to_string(goals[s]));
        CHECK(std::abs(curves[s].points[0].mean - asymptotic_bound(std::int64_t(goals[s]))) < 0.02);
        CHECK(curves[s].points[0].runs == 30);
    }
}

TEST_CASE("run spread shrinks as populations grow")
{
    const std::vector<std::size_t> agents{6, 24, 102, 501};
    const std::vector<std::size_t> goals{2, 3};
    for (const auto& curve : exp_varying_goals(agents, goals, {2, 40, 1})) {
        CHECK(curve.points.back().std < curve.points.front().std);
        for (std::size_t p = 1; p < curve.points.size(); ++p) CHECK(curve.points[p].x > curve.points[p - 1].x);
    }
}

TEST_CASE("weight sensitivity endpoints and dilution")
{
    const std::vector<double> weights{0.0, 1.0};
    const std::vector<std::size_t> areas{1, 4};
    const std::vector<std::size_t> goals{2, 4};
    const auto curves = exp_weight_sensitivity(weights, areas, goals, {3, 100, 1});
    REQUIRE(curves.size() == 4);

    const auto& one_two = find_curve(curves, "problem_areas=1;goals=2");
    CHECK(one_two.points[0].mean <= 0.001);
    CHECK(std::abs(one_two.points[1].mean - 0.5) < 0.03);
    CHECK(std::abs(find_curve(curves, "problem_areas=1;goals=4").points[1].mean - 0.75) < 0.03);

    // only one of four areas is re-weighted, so the swing is a quarter as large
    const auto& four_two = find_curve(curves, "problem_areas=4;goals=2");
    const double swing = four_two.points[1].mean - four_two.points[0].mean;
    CHECK(std::abs(swing - (one_two.points[1].mean - one_two.points[0].mean) / 4.0) < 0.03);

    CHECK_THROWS_AS(exp_weight_sensitivity(std::vector<double>{1.5}, areas, goals, {}), PreconditionError);
}

TEST_CASE("goal distribution counts")
{
    CHECK(distribution_counts(0.0, 3, 1000) == std::vector<std::int64_t>{0, 500, 500});
    CHECK(distribution_counts(0.5, 2, 1000) == std::vector<std::int64_t>{500, 500});
    CHECK(distribution_counts(0.1, 4, 10) == std::vector<std::int64_t>{1, 3, 3, 3});
    CHECK(distribution_counts(0.0, 4, 1000) == std::vector<std::int64_t>{0, 334, 333, 333});
    CHECK_THROWS_AS(distribution_counts(0.5, 1, 10), PreconditionError);
}

TEST_CASE("goal distribution curves")
{
    const auto grid = defaults::unit_grid(20);
    const std::vector<std::size_t> goals{2, 4};
    const auto curves = exp_goal_distribution(grid, goals, 1000);

    const auto& two = curves[0];
    const auto peak2 = std::max_element(two.points.begin(), two.points.end(),
                                        [](const auto& a, const auto& b) { return a.mean < b.mean; });
    CHECK(peak2->x == 0.5);
    CHECK(std::abs(peak2->mean - max_uniform_misalignment(1000, 2)) < 1e-12);
    CHECK(two.points.front().mean == 0.0);
    CHECK(two.points.back().mean == 0.0);

    const auto& four = curves[1];
    const auto peak4 = std::max_element(four.points.begin(), four.points.end(),
                                        [](const auto& a, const auto& b) { return a.mean < b.mean; });
    CHECK(peak4->x == 0.25);
    CHECK(std::abs(peak4->mean - max_uniform_misalignment(1000, 4)) < 1e-12);
    CHECK(four.points.back().mean == 0.0);
    for (const auto& point : four.points) {
        CHECK(point.std == 0.0);
        CHECK(point.runs == 1);
    }
}

TEST_CASE("conflict levels match the random-population expectation")
{
    const std::vector<std::size_t> goals{1, 2, 4};
    const std::vector<std::vector<double>> configs{{1.0}, {0.0}, {0.2, 0.8}};
    const auto curves = exp_conflict_levels(goals, configs, {11, 100, 1});
    REQUIRE(curves.size() == 3);
    CHECK(curves[0].series_key() == "problem_areas=1;conflicts=1");
    CHECK(curves[2].series_key() == "problem_areas=2;conflicts=0.2|0.8");

    const double expected2 = random_population_expectation(2, 0.25, 0.75);
    CHECK(std::abs(expected2 - 0.24455132159148252) < 1e-9);
    CHECK(curves[0].points[0].mean == 0.0);
    CHECK(std::abs(curves[0].points[1].mean - expected2) < 0.03);
    CHECK(std::abs(curves[0].points[2].mean - random_population_expectation(4, 0.25, 0.75)) < 0.03);
    for (const auto& point : curves[1].points) CHECK(point.mean == 0.0);
    // both areas average to 0.5
    CHECK(std::abs(curves[2].points[1].mean - 0.5 * expected2) < 0.02);
}

TEST_CASE("carla population")
{
    const World w = carla_world(0.5, 1.0, CarlaWeightMode::table, 1000);
    CHECK(w.agent_count() == 1000);
    CHECK(w.area_count() == 8);
    CHECK(w.agents[0].kind == AgentKind::ai);
    CHECK(w.agents[999].kind == AgentKind::human);
    CHECK(goal_counts(w, 3)[1] == 500);

    const double exact = overall_misalignment(w, true).overall;
    CHECK(std::abs(exact - carla_expectation(500, 1000, 1.0)) < 1e-12);
    CHECK(std::abs(exact - 0.1064) < 0.001);
}

TEST_CASE("carla sweep")
{
    const auto grid = defaults::unit_grid(20);
    const std::vector<double> conflicts{0.5, 1.0};
    const std::vector<CarlaWeightMode> modes{CarlaWeightMode::table, CarlaWeightMode::max};
    const auto curves = exp_carla(grid, conflicts, modes, 1000);
    REQUIRE(curves.size() == 4);

    const auto& table = find_curve(curves, "conflict=1;weights=table");
    const auto peak = std::max_element(table.points.begin(), table.points.end(),
                                       [](const auto& a, const auto& b) { return a.mean < b.mean; });
    CHECK(peak->x == 0.5);
    CHECK(table.points.front().mean == 0.0);
    CHECK(table.points.back().mean == 0.0);
    for (const auto& point : table.points) {
        CHECK(point.mean <= 0.11);
        const auto vehicles = std::size_t(std::llround(point.x * 1000.0));
        CHECK(std::abs(point.mean - carla_expectation(vehicles, 1000, 1.0)) < 1e-12);
    }

    const auto& max = find_curve(curves, "conflict=1;weights=max");
    CHECK(std::abs(max.points[10].mean - 0.5005005005005005) < 1e-6);

    const auto& half = find_curve(curves, "conflict=0.5;weights=table");
    CHECK(std::abs(half.points[10].mean - 0.5 * table.points[10].mean) < 1e-12);
}

TEST_CASE("evaluate a small explicit world")
{
    World w;
    w.problem_areas.push_back({"p", ConflictMatrix::from_lower_triangular(2, {{0.6}}), {}});
    w.agents.push_back({"x", AgentKind::human, {{GoalId{1}, 0.8}}});
    w.agents.push_back({"y", AgentKind::ai, {{GoalId{2}, 0.5}}});
    CHECK(std::abs(evaluate_scenario(w).overall - 0.3794733192202055) < 1e-12);

    w.agents[1].stances[0].weight = 2.0;
    CHECK_THROWS_AS(evaluate_scenario(w), PreconditionError);
}

TEST_CASE("curves are sorted and well-formed")
{
    const std::vector<std::size_t> agents{24, 3, 12};
    const std::vector<std::size_t> areas{2};
    for (const auto& curve : exp_varying_problem_areas(agents, areas, {1, 10, 1})) {
        CHECK(curve.experiment == "problem-areas");
        REQUIRE(curve.points.size() == 3);
        CHECK(curve.points[0].x == 3.0);
        CHECK(curve.points[2].x == 24.0);
        for (const auto& point : curve.points) {
            CHECK(point.mean >= 0.0);
            CHECK(point.mean <= 1.0);
            CHECK(point.std >= 0.0);
        }
    }
    CHECK_THROWS_AS(exp_varying_problem_areas(agents, areas, {1, 0, 1}), PreconditionError);
}
