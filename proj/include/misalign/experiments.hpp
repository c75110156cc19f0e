#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "misalign/core_model.hpp"

namespace misalign {

struct CurvePoint {
    double x = 0.0;
    double mean = 0.0;
    double std = 0.0;  // population standard deviation across runs
    std::size_t runs = 1;
};

struct ExperimentCurve {
    std::string experiment;
    std::vector<std::pair<std::string, std::string>> series_params;  // insertion order is the encoding order
    std::vector<CurvePoint> points;                                   // ascending x

    /// `key=value;key=value` in parameter order.
    std::string series_key() const;
};

struct ExperimentOptions {
    std::uint64_t seed = 0;
    std::size_t runs = 100;
    unsigned threads = 1;  // 0 selects std::thread::hardware_concurrency()
};

namespace defaults {
inline const std::vector<std::size_t> agent_counts{3, 6, 12, 24, 51, 102, 249, 501, 1002};
inline const std::vector<std::size_t> area_counts{1, 2, 3, 4};
inline const std::vector<std::size_t> goal_counts{1, 2, 3, 4, 5};
inline const std::vector<std::size_t> sensitivity_goal_counts{2, 4};
inline const std::vector<std::size_t> distribution_goal_counts{2, 3, 4, 5};
inline const std::vector<std::size_t> conflict_goal_counts{1, 2, 3, 4, 5, 6};
inline const std::vector<std::vector<double>> conflict_configs{
    {0.25}, {0.5}, {0.75}, {1.0}, {0.2, 0.8}, {0.5, 0.5}, {0.25, 0.75}, {0.0, 1.0}};
inline const std::vector<double> carla_conflicts{0.25, 0.5, 0.75, 1.0};

/// {0, 1/steps, ..., 1}
std::vector<double> unit_grid(std::size_t steps);
}  // namespace defaults

/// Fixed per-area weights for the autonomous-vehicle case: vehicle and pedestrian columns.
struct CarlaWeights {
    std::array<const char*, 8> events;
    std::array<double, 8> vehicle;
    std::array<double, 8> pedestrian;
};
extern const CarlaWeights carla_table;

enum class CarlaWeightMode { table, max };
std::string to_string(CarlaWeightMode mode);

/// Random goals, k goals per area, unit conflicts and weights; one curve per area count, x = agents.
std::vector<ExperimentCurve> exp_varying_problem_areas(std::span<const std::size_t> agent_counts,
                                                       std::span<const std::size_t> area_counts,
                                                       const ExperimentOptions& options, std::size_t goals = 3);

/// Random goals over `areas` areas; one curve per goal count, x = agents.
std::vector<ExperimentCurve> exp_varying_goals(std::span<const std::size_t> agent_counts,
                                               std::span<const std::size_t> goal_counts,
                                               const ExperimentOptions& options, std::size_t areas = 4);

/// Weight w for goal-1 holders in the first area, 1 elsewhere; one curve per
/// (area count, goal count), x = w.
std::vector<ExperimentCurve> exp_weight_sensitivity(std::span<const double> weight_grid,
                                                    std::span<const std::size_t> area_counts,
                                                    std::span<const std::size_t> goal_counts,
                                                    const ExperimentOptions& options, std::size_t agents = 100);

/// round(rho*n) agents on goal 1, the rest split evenly over goals 2..k
/// (remainder to the lowest indices). Deterministic.
std::vector<std::int64_t> distribution_counts(double proportion, std::size_t goals, std::size_t agents);

/// One curve per goal count, x = proportion on goal 1. Deterministic.
std::vector<ExperimentCurve> exp_goal_distribution(std::span<const double> proportion_grid,
                                                   std::span<const std::size_t> goal_counts,
                                                   std::size_t agents = 1000);

/// Each config lists one conflict value per area, shared by all goal pairs
/// of that area; weights uniform in `weight_range`. One curve per config, x = goals.
std::vector<ExperimentCurve> exp_conflict_levels(std::span<const std::size_t> goal_counts,
                                                 std::span<const std::vector<double>> area_configs,
                                                 const ExperimentOptions& options, std::size_t agents = 120,
                                                 std::pair<double, double> weight_range = {0.25, 0.75});

/// Vehicle/pedestrian population over the eight CARLA event areas;
/// x = vehicle fraction. One curve per (conflict level, weight mode). Deterministic.
std::vector<ExperimentCurve> exp_carla(std::span<const double> mix_grid, std::span<const double> conflict_levels,
                                       std::span<const CarlaWeightMode> weight_modes, std::size_t agents = 1000);

/// The CARLA population at one vehicle fraction.
World carla_world(double vehicle_fraction, double conflict, CarlaWeightMode mode, std::size_t agents);

/// Weighted report for a validated world; throws PreconditionError on an invalid world.
MisalignmentReport evaluate_scenario(const World& world);

/// Mean and population standard deviation, two-pass, in index order.
std::pair<double, double> mean_and_std(std::span<const double> values);

}  // namespace misalign
