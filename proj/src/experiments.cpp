#include "misalign/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "misalign/format.hpp"
#include "misalign/misalignment.hpp"
#include "misalign/rng.hpp"
#include "misalign/validate.hpp"
#include "misalign/worldgen.hpp"

namespace misalign {

const CarlaWeights carla_table{
    {"No pedestrian collision", "No vehicle collision", "No static object collision", "No red light violation",
     "No stop sign violation", "No route blockage", "Keep appropriate speed", "No yield violation"},
    {0.50, 0.40, 0.35, 0.30, 0.20, 0.30, 0.30, 0.30},
    {0.99, 0.15, 0.15, 0.05, 0.05, 0.05, 0.01, 0.05},
};

std::string to_string(CarlaWeightMode mode) { return mode == CarlaWeightMode::table ? "table" : "max"; }

std::string ExperimentCurve::series_key() const
{
    std::string key;
    for (const auto& [name, value] : series_params) {
        if (!key.empty()) key += ';';
        key += name;
        key += '=';
        key += value;
    }
    return key;
}

std::vector<double> defaults::unit_grid(std::size_t steps)
{
    std::vector<double> grid;
    for (std::size_t i = 0; i <= steps; ++i) grid.push_back(double(i) / double(steps));
    return grid;
}

std::pair<double, double> mean_and_std(std::span<const double> values)
{
    if (values.empty()) return {0.0, 0.0};
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / double(values.size());
    double squares = 0.0;
    for (double v : values) squares += (v - mean) * (v - mean);
    return {mean, std::sqrt(squares / double(values.size()))};
}

namespace {

template <typename T>
std::vector<T> sorted(std::span<const T> values)
{
    std::vector<T> out(values.begin(), values.end());
    std::sort(out.begin(), out.end());
    return out;
}

unsigned resolve_threads(unsigned requested)
{
    if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
    return requested;
}

// Runs fn(series, point, rng) for every (series, point, run) cell. The RNG for
// a cell is derived from (seed, series, run), so results are independent of
// the thread count and of the point grid.
template <typename Fn>
std::vector<double> run_cells(std::size_t n_series, std::size_t n_points, std::size_t runs,
                              const ExperimentOptions& options, Fn fn)
{
    const std::size_t total = n_series * n_points * runs;
    std::vector<double> results(total, 0.0);
    const RngStream root(options.seed);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t cell = next++; cell < total; cell = next++) {
            const std::size_t run = cell % runs;
            const std::size_t point = (cell / runs) % n_points;
            const std::size_t series = cell / (runs * n_points);
            try {
                RngStream rng = root.derive({series, run});
                results[cell] = fn(series, point, rng);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = total;
            }
        }
    };

    const unsigned n_threads = unsigned(std::min<std::size_t>(resolve_threads(options.threads), std::max<std::size_t>(total, 1)));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

std::vector<CurvePoint> reduce_points(std::span<const double> results, std::size_t series, std::span<const double> xs,
                                      std::size_t runs)
{
    std::vector<CurvePoint> points;
    for (std::size_t p = 0; p < xs.size(); ++p) {
        const auto offset = (series * xs.size() + p) * runs;
        const auto [mean, std] = mean_and_std(results.subspan(offset, runs));
        points.push_back({xs[p], mean, std, runs});
    }
    return points;
}

void require_runs(const ExperimentOptions& options)
{
    if (options.runs < 1) throw PreconditionError("runs must be at least 1");
}

WorldSpec max_conflict_spec(std::size_t areas, std::size_t agents, std::size_t goals)
{
    WorldSpec spec;
    spec.areas = areas;
    spec.agents = agents;
    spec.goals_per_area.assign(areas, goals);
    spec.ranges.conflict = {1.0, 1.0};
    spec.ranges.weights = {1.0, 1.0};
    return spec;
}

std::vector<double> as_x(std::span<const std::size_t> values)
{
    std::vector<double> xs;
    for (auto v : values) xs.push_back(double(v));
    return xs;
}

std::string join_values(const std::vector<double>& values)
{
    std::string out;
    for (double v : values) {
        if (!out.empty()) out += '|';
        out += format_shortest(v);
    }
    return out;
}

}  // namespace

std::vector<ExperimentCurve> exp_varying_problem_areas(std::span<const std::size_t> agent_counts,
                                                       std::span<const std::size_t> area_counts,
                                                       const ExperimentOptions& options, std::size_t goals)
{
    require_runs(options);
    const auto agents = sorted(agent_counts);
    const auto areas = std::vector<std::size_t>(area_counts.begin(), area_counts.end());
    const auto xs = as_x(agents);

    const auto results = run_cells(areas.size(), agents.size(), options.runs, options,
                                   [&](std::size_t s, std::size_t p, RngStream& rng) {
                                       const World world = init_world(max_conflict_spec(areas[s], agents[p], goals), rng);
                                       return overall_misalignment(world, true).overall;
                                   });

    std::vector<ExperimentCurve> curves;
    for (std::size_t s = 0; s < areas.size(); ++s) {
        curves.push_back({"problem-areas",
                          {{"problem_areas", std::to_string(areas[s])}, {"goals", std::to_string(goals)}},
                          reduce_points(results, s, xs, options.runs)});
    }
    return curves;
}

std::vector<ExperimentCurve> exp_varying_goals(std::span<const std::size_t> agent_counts,
                                               std::span<const std::size_t> goal_counts,
                                               const ExperimentOptions& options, std::size_t areas)
{
    require_runs(options);
    const auto agents = sorted(agent_counts);
    const auto goals = std::vector<std::size_t>(goal_counts.begin(), goal_counts.end());
    const auto xs = as_x(agents);

    const auto results = run_cells(goals.size(), agents.size(), options.runs, options,
                                   [&](std::size_t s, std::size_t p, RngStream& rng) {
                                       const World world = init_world(max_conflict_spec(areas, agents[p], goals[s]), rng);
                                       return overall_misalignment(world, true).overall;
                                   });

    std::vector<ExperimentCurve> curves;
    for (std::size_t s = 0; s < goals.size(); ++s) {
        curves.push_back({"goals",
                          {{"problem_areas", std::to_string(areas)}, {"goals", std::to_string(goals[s])}},
                          reduce_points(results, s, xs, options.runs)});
    }
    return curves;
}

std::vector<ExperimentCurve> exp_weight_sensitivity(std::span<const double> weight_grid,
                                                    std::span<const std::size_t> area_counts,
                                                    std::span<const std::size_t> goal_counts,
                                                    const ExperimentOptions& options, std::size_t agents)
{
    require_runs(options);
    const auto weights = sorted(weight_grid);
    for (double w : weights) {
        if (!(w >= 0.0 && w <= 1.0)) throw PreconditionError("swept weight must lie in [0,1]");
    }
    std::vector<std::pair<std::size_t, std::size_t>> series;
    for (auto a : area_counts) {
        for (auto k : goal_counts) series.emplace_back(a, k);
    }

    const auto results = run_cells(series.size(), weights.size(), options.runs, options,
                                   [&](std::size_t s, std::size_t p, RngStream& rng) {
                                       const auto [areas, goals] = series[s];
                                       World world = init_world(max_conflict_spec(areas, agents, goals), rng);
                                       for (auto& agent : world.agents) {
                                           if (agent.stances[0].goal.index == 1) agent.stances[0].weight = weights[p];
                                       }
                                       return overall_misalignment(world, true).overall;
                                   });

    std::vector<ExperimentCurve> curves;
    for (std::size_t s = 0; s < series.size(); ++s) {
        curves.push_back({"weight-sensitivity",
                          {{"problem_areas", std::to_string(series[s].first)},
                           {"goals", std::to_string(series[s].second)}},
                          reduce_points(results, s, weights, options.runs)});
    }
    return curves;
}

std::vector<std::int64_t> distribution_counts(double proportion, std::size_t goals, std::size_t agents)
{
    if (goals < 2) throw PreconditionError("goal distribution needs at least 2 goals");
    if (!(proportion >= 0.0 && proportion <= 1.0)) throw PreconditionError("proportion must lie in [0,1]");
    const auto n = std::int64_t(agents);
    const std::int64_t first = std::llround(proportion * double(n));  // half away from zero
    const std::int64_t rest = n - first;
    const auto others = std::int64_t(goals - 1);
    std::vector<std::int64_t> counts{first};
    for (std::int64_t g = 0; g < others; ++g) {
        counts.push_back(rest / others + (g < rest % others ? 1 : 0));
    }
    return counts;
}

std::vector<ExperimentCurve> exp_goal_distribution(std::span<const double> proportion_grid,
                                                   std::span<const std::size_t> goal_counts, std::size_t agents)
{
    const auto proportions = sorted(proportion_grid);
    std::vector<ExperimentCurve> curves;
    for (auto k : goal_counts) {
        ExperimentCurve curve{"goal-distribution", {{"agents", std::to_string(agents)}, {"goals", std::to_string(k)}}, {}};
        for (double rho : proportions) {
            const auto counts = distribution_counts(rho, k, agents);
            curve.points.push_back({rho, area_misalignment_mutex(counts).value, 0.0, 1});
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

std::vector<ExperimentCurve> exp_conflict_levels(std::span<const std::size_t> goal_counts,
                                                 std::span<const std::vector<double>> area_configs,
                                                 const ExperimentOptions& options, std::size_t agents,
                                                 std::pair<double, double> weight_range)
{
    require_runs(options);
    const auto goals = sorted(goal_counts);
    const auto xs = as_x(goals);
    for (const auto& config : area_configs) {
        if (config.empty()) throw PreconditionError("area config needs at least one conflict value");
    }

    const auto results = run_cells(area_configs.size(), goals.size(), options.runs, options,
                                   [&](std::size_t s, std::size_t p, RngStream& rng) {
                                       const auto& config = area_configs[s];
                                       const std::size_t k = goals[p];
                                       WorldSpec spec;
                                       spec.areas = config.size();
                                       spec.agents = agents;
                                       spec.goals_per_area.assign(config.size(), k);
                                       spec.randomize.conflict = false;
                                       spec.ranges.weights = {weight_range.first, weight_range.second};
                                       std::vector<std::vector<std::vector<double>>> presets;
                                       for (double c : config) {
                                           std::vector<std::vector<double>> rows;
                                           for (std::size_t r = 1; r < k; ++r) rows.emplace_back(r, c);
                                           presets.push_back(std::move(rows));
                                       }
                                       spec.presets.conflict = std::move(presets);
                                       return overall_misalignment(init_world(spec, rng), true).overall;
                                   });

    std::vector<ExperimentCurve> curves;
    for (std::size_t s = 0; s < area_configs.size(); ++s) {
        curves.push_back({"conflict-levels",
                          {{"problem_areas", std::to_string(area_configs[s].size())},
                           {"conflicts", join_values(area_configs[s])}},
                          reduce_points(results, s, xs, options.runs)});
    }
    return curves;
}

World carla_world(double vehicle_fraction, double conflict, CarlaWeightMode mode, std::size_t agents)
{
    if (!(vehicle_fraction >= 0.0 && vehicle_fraction <= 1.0)) {
        throw PreconditionError("vehicle fraction must lie in [0,1]");
    }
    World world;
    for (std::size_t j = 0; j < carla_table.events.size(); ++j) {
        world.problem_areas.push_back({"p" + std::to_string(j + 1), ConflictMatrix::uniform(2, conflict),
                                       {std::string(carla_table.events[j]) + " (vehicle)",
                                        std::string(carla_table.events[j]) + " (pedestrian)"}});
    }
    const auto vehicles = std::size_t(std::llround(vehicle_fraction * double(agents)));
    for (std::size_t i = 0; i < agents; ++i) {
        const bool vehicle = i < vehicles;
        Agent agent{(vehicle ? "v" : "h") + std::to_string(i + 1), vehicle ? AgentKind::ai : AgentKind::human, {}};
        for (std::size_t j = 0; j < carla_table.events.size(); ++j) {
            const double w = mode == CarlaWeightMode::max ? 1.0
                             : vehicle                    ? carla_table.vehicle[j]
                                                          : carla_table.pedestrian[j];
            agent.stances.push_back({GoalId{vehicle ? 1u : 2u}, w});
        }
        world.agents.push_back(std::move(agent));
    }
    return world;
}

std::vector<ExperimentCurve> exp_carla(std::span<const double> mix_grid, std::span<const double> conflict_levels,
                                       std::span<const CarlaWeightMode> weight_modes, std::size_t agents)
{
    const auto mix = sorted(mix_grid);
    std::vector<ExperimentCurve> curves;
    for (double conflict : conflict_levels) {
        for (auto mode : weight_modes) {
            ExperimentCurve curve{"carla",
                                  {{"conflict", format_shortest(conflict)}, {"weights", to_string(mode)}},
                                  {}};
            for (double fraction : mix) {
                const World world = carla_world(fraction, conflict, mode, agents);
                curve.points.push_back({fraction, overall_misalignment(world, true).overall, 0.0, 1});
            }
            curves.push_back(std::move(curve));
        }
    }
    return curves;
}

MisalignmentReport evaluate_scenario(const World& world)
{
    const auto violations = validate_world(world);
    if (has_errors(violations)) {
        for (const auto& v : violations) {
            if (v.severity == Severity::error) {
                throw PreconditionError("invalid world: " + v.path + ": " + v.message);
            }
        }
    }
    return overall_misalignment(world, true);
}

}  // namespace misalign
