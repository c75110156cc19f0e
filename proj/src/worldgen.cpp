#include "misalign/worldgen.hpp"

#include <cmath>
#include <string>

namespace misalign {

namespace {

std::string idx(std::size_t i) { return "[" + std::to_string(i) + "]"; }

void check_range(const ValueRange& r, const std::string& field)
{
    if (!(std::isfinite(r.min) && std::isfinite(r.max)) || r.min < 0.0 || r.max > 1.0 || r.min > r.max) {
        throw SpecError(field + ": range must satisfy 0 <= min <= max <= 1");
    }
}

bool is_lower_triangular(const std::vector<std::vector<double>>& rows, std::size_t k)
{
    if (rows.size() != k - 1) return false;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != r + 1) return false;
    }
    return true;
}

bool is_full(const std::vector<std::vector<double>>& rows, std::size_t k)
{
    if (rows.size() != k) return false;
    for (const auto& row : rows) {
        if (row.size() != k) return false;
    }
    return true;
}

// Conflict c(g_{a+1}, g_{b+1}) for a > b, from either preset layout.
double preset_conflict(const std::vector<std::vector<double>>& rows, std::size_t k, std::size_t a, std::size_t b)
{
    return is_full(rows, k) ? rows[b][a] : rows[a - 1][b];
}

void check_preset_conflict(const std::vector<std::vector<double>>& rows, std::size_t k, std::size_t j)
{
    const std::string field = "presets.conflict" + idx(j);
    if (is_full(rows, k)) {
        for (std::size_t a = 0; a < k; ++a) {
            if (rows[a][a] != 0.0) throw SpecError(field + idx(a) + idx(a) + ": diagonal must be 0");
            for (std::size_t b = 0; b < a; ++b) {
                if (rows[a][b] != rows[b][a]) {
                    throw SpecError(field + idx(a) + idx(b) + ": contradicts mirrored entry");
                }
            }
        }
    } else if (!is_lower_triangular(rows, k)) {
        throw SpecError(field + ": expected " + std::to_string(k - 1) +
                        " lower-triangular rows or a full " + std::to_string(k) + "x" + std::to_string(k) +
                        " matrix");
    }
    for (std::size_t a = 1; a < k; ++a) {
        for (std::size_t b = 0; b < a; ++b) {
            const double v = preset_conflict(rows, k, a, b);
            if (!(v >= 0.0 && v <= 1.0)) {
                throw SpecError(field + idx(a) + idx(b) + ": conflict must lie in [0,1]");
            }
        }
    }
}

}  // namespace

void validate_spec(const WorldSpec& spec)
{
    if (spec.areas < 1) throw SpecError("areas: need at least one problem area");
    if (spec.goals_per_area.size() != spec.areas) {
        throw SpecError("goals_per_area: expected " + std::to_string(spec.areas) + " entries, got " +
                        std::to_string(spec.goals_per_area.size()));
    }
    for (std::size_t j = 0; j < spec.areas; ++j) {
        if (spec.goals_per_area[j] < 1) throw SpecError("goals_per_area" + idx(j) + ": need at least one goal");
    }
    check_range(spec.ranges.conflict, "ranges.conflict");
    check_range(spec.ranges.weights, "ranges.weights");

    if (!spec.randomize.conflict) {
        if (!spec.presets.conflict) throw SpecError("presets.conflict: required when randomize.conflict is false");
        if (spec.presets.conflict->size() != spec.areas) {
            throw SpecError("presets.conflict: expected " + std::to_string(spec.areas) + " areas");
        }
        for (std::size_t j = 0; j < spec.areas; ++j) {
            check_preset_conflict((*spec.presets.conflict)[j], spec.goals_per_area[j], j);
        }
    }
    if (!spec.randomize.goals) {
        if (!spec.presets.goals) throw SpecError("presets.goals: required when randomize.goals is false");
        const auto& goals = *spec.presets.goals;
        if (goals.size() != spec.agents) {
            throw SpecError("presets.goals: expected " + std::to_string(spec.agents) + " agents");
        }
        for (std::size_t i = 0; i < goals.size(); ++i) {
            if (goals[i].size() != spec.areas) {
                throw SpecError("presets.goals" + idx(i) + ": expected " + std::to_string(spec.areas) + " areas");
            }
            for (std::size_t j = 0; j < spec.areas; ++j) {
                const std::size_t lowest = spec.allow_null_goals ? 0 : 1;
                if (goals[i][j] < lowest || goals[i][j] > spec.goals_per_area[j]) {
                    throw SpecError("presets.goals" + idx(i) + idx(j) + ": goal " + std::to_string(goals[i][j]) +
                                    " out of range");
                }
            }
        }
    }
    if (!spec.randomize.weights) {
        if (!spec.presets.weights) throw SpecError("presets.weights: required when randomize.weights is false");
        const auto& weights = *spec.presets.weights;
        if (weights.size() != spec.agents) {
            throw SpecError("presets.weights: expected " + std::to_string(spec.agents) + " agents");
        }
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i].size() != spec.areas) {
                throw SpecError("presets.weights" + idx(i) + ": expected " + std::to_string(spec.areas) + " areas");
            }
            for (std::size_t j = 0; j < spec.areas; ++j) {
                if (!(weights[i][j] >= 0.0 && weights[i][j] <= 1.0)) {
                    throw SpecError("presets.weights" + idx(i) + idx(j) + ": weight must lie in [0,1]");
                }
            }
        }
    }
}

World init_world(const WorldSpec& spec, RngStream& rng)
{
    validate_spec(spec);
    World world;
    world.problem_areas.reserve(spec.areas);
    for (std::size_t j = 0; j < spec.areas; ++j) {
        const std::size_t k = spec.goals_per_area[j];
        std::vector<std::vector<double>> rows(k > 0 ? k - 1 : 0);
        for (std::size_t r = 0; r < rows.size(); ++r) rows[r].resize(r + 1);
        // pairs (a, b) with b > a, a ascending
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b) {
                rows[b - 1][a] = spec.randomize.conflict
                                     ? rng.uniform(spec.ranges.conflict.min, spec.ranges.conflict.max)
                                     : preset_conflict((*spec.presets.conflict)[j], k, b, a);
            }
        }
        world.problem_areas.push_back(
            {"p" + std::to_string(j + 1), ConflictMatrix::from_lower_triangular(k, rows), {}});
    }
    return add_agents(std::move(world), spec, rng);
}

World init_world(const WorldSpec& spec)
{
    RngStream rng(spec.seed);
    return init_world(spec, rng);
}

World add_agents(World world, const WorldSpec& spec, RngStream& rng)
{
    if (world.area_count() != spec.areas) {
        throw SpecError("areas: world has " + std::to_string(world.area_count()) + " areas, spec has " +
                        std::to_string(spec.areas));
    }
    world.agents.reserve(world.agents.size() + spec.agents);
    for (std::size_t i = 0; i < spec.agents; ++i) {
        Agent agent{"a" + std::to_string(i + 1), AgentKind::other, {}};
        agent.stances.reserve(spec.areas);
        for (std::size_t j = 0; j < spec.areas; ++j) {
            const std::size_t k = world.problem_areas[j].goal_count();
            Stance stance;
            if (spec.randomize.goals) {
                stance.goal.index = spec.allow_null_goals ? std::size_t(rng.uniform_index(k + 1))
                                                          : std::size_t(rng.uniform_index(k)) + 1;
            } else {
                stance.goal.index = (*spec.presets.goals)[i][j];
                if (stance.goal.index > k) {
                    throw SpecError("presets.goals" + idx(i) + idx(j) + ": goal out of range");
                }
            }
            stance.weight = spec.randomize.weights ? rng.uniform(spec.ranges.weights.min, spec.ranges.weights.max)
                                                   : (*spec.presets.weights)[i][j];
            agent.stances.push_back(stance);
        }
        world.agents.push_back(std::move(agent));
    }
    return world;
}

}  // namespace misalign
