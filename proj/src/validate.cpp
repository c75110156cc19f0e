#include "misalign/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace misalign {

std::string to_string(ViolationKind kind)
{
    switch (kind) {
    case ViolationKind::no_goals: return "no goals";
    case ViolationKind::asymmetric_conflict: return "asymmetric conflict";
    case ViolationKind::nonzero_diagonal: return "nonzero diagonal";
    case ViolationKind::null_goal_conflict: return "null goal conflict";
    case ViolationKind::conflict_out_of_range: return "conflict out of range";
    case ViolationKind::label_count_mismatch: return "label count mismatch";
    case ViolationKind::stance_count_mismatch: return "stance count mismatch";
    case ViolationKind::goal_out_of_range: return "goal out of range";
    case ViolationKind::weight_out_of_range: return "weight out of range";
    case ViolationKind::too_few_agents: return "too few agents";
    case ViolationKind::more_goals_than_agents: return "more goals than agents";
    }
    return "unknown";
}

namespace {

bool in_unit_interval(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

std::string area_path(std::size_t j) { return "problem_areas[" + std::to_string(j) + "]"; }

std::string cell_path(std::size_t j, std::size_t x, std::size_t y)
{
    return area_path(j) + ".conflict[" + std::to_string(x) + "][" + std::to_string(y) + "]";
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void check_conflict(const ProblemArea& area, std::size_t j, std::vector<Violation>& out)
{
    const auto& c = area.conflict;
    const std::size_t dim = c.goal_count() + 1;
    for (std::size_t x = 0; x < dim; ++x) {
        if (c.at(x, x) != 0.0) {
            out.push_back({ViolationKind::nonzero_diagonal, Severity::error, cell_path(j, x, x),
                           "diagonal entry is " + num(c.at(x, x)) + ", must be 0"});
        }
        for (std::size_t y = x + 1; y < dim; ++y) {
            const double upper = c.at(x, y);
            const double lower = c.at(y, x);
            if (!in_unit_interval(upper) || !in_unit_interval(lower)) {
                out.push_back({ViolationKind::conflict_out_of_range, Severity::error, cell_path(j, y, x),
                               "conflict " + num(in_unit_interval(lower) ? upper : lower) +
                                   " outside [0,1]"});
            }
            if (upper != lower && !(std::isnan(upper) && std::isnan(lower))) {
                out.push_back({ViolationKind::asymmetric_conflict, Severity::error, cell_path(j, x, y),
                               "c(" + std::to_string(x) + "," + std::to_string(y) + ")=" + num(upper) +
                                   " but c(" + std::to_string(y) + "," + std::to_string(x) +
                                   ")=" + num(lower)});
            }
            if (x == 0 && (upper != 0.0 || lower != 0.0)) {
                out.push_back({ViolationKind::null_goal_conflict, Severity::error, cell_path(j, y, 0),
                               "null goal must not conflict with goal " + std::to_string(y)});
            }
        }
    }
}

}  // namespace

std::vector<Violation> validate_world(const World& world)
{
    std::vector<Violation> out;
    const std::size_t m = world.area_count();
    const std::size_t n = world.agent_count();

    for (std::size_t j = 0; j < m; ++j) {
        const auto& area = world.problem_areas[j];
        const std::size_t k = area.goal_count();
        if (k < 1) {
            out.push_back({ViolationKind::no_goals, Severity::error, area_path(j),
                           "problem area '" + area.id + "' has no non-zero goals"});
        }
        check_conflict(area, j, out);
        if (!area.goal_labels.empty() && area.goal_labels.size() != k) {
            out.push_back({ViolationKind::label_count_mismatch, Severity::error, area_path(j) + ".goal_labels",
                           std::to_string(area.goal_labels.size()) + " labels for " + std::to_string(k) +
                               " goals"});
        }
        if (k > n && n > 0) {
            out.push_back({ViolationKind::more_goals_than_agents, Severity::warning, area_path(j),
                           std::to_string(k) + " goals but only " + std::to_string(n) + " agents"});
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        const auto& agent = world.agents[i];
        const std::string path = "agents[" + std::to_string(i) + "]";
        if (agent.stances.size() != m) {
            out.push_back({ViolationKind::stance_count_mismatch, Severity::error, path + ".stances",
                           std::to_string(agent.stances.size()) + " stances for " + std::to_string(m) +
                               " problem areas"});
        }
        const std::size_t checked = std::min(agent.stances.size(), m);
        for (std::size_t j = 0; j < checked; ++j) {
            const auto& stance = agent.stances[j];
            const std::string spath = path + ".stances[" + std::to_string(j) + "]";
            const std::size_t k = world.problem_areas[j].goal_count();
            if (stance.goal.index > k) {
                out.push_back({ViolationKind::goal_out_of_range, Severity::error, spath + ".goal",
                               "goal " + std::to_string(stance.goal.index) + " but area has " +
                                   std::to_string(k) + " goals"});
            }
            if (!in_unit_interval(stance.weight)) {
                out.push_back({ViolationKind::weight_out_of_range, Severity::error, spath + ".weight",
                               "weight " + num(stance.weight) + " outside [0,1]"});
            }
        }
    }

    if (n < 2) {
        out.push_back({ViolationKind::too_few_agents, Severity::warning, "agents",
                       std::to_string(n) + " agents; scoring needs at least 2"});
    }
    return out;
}

bool has_errors(const std::vector<Violation>& violations)
{
    return std::any_of(violations.begin(), violations.end(),
                       [](const Violation& v) { return v.severity == Severity::error; });
}

}  // namespace misalign
