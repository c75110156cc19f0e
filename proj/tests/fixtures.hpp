#pragma once

#include <string>

#include "misalign/core_model.hpp"

namespace misalign::fixtures {

/// Recommender-system case: customer, retailer, recommender over food and household shopping.
inline World shopping_world()
{
    World w;
    w.problem_areas.push_back({"food", ConflictMatrix::from_lower_triangular(3, {{0.1}, {0.1, 0.1}}),
                               {"Convenience at low price", "Increase net profits", "Maximize checkout value"}});
    w.problem_areas.push_back({"household", ConflictMatrix::from_lower_triangular(3, {{0.5}, {0.9, 0.3}}),
                               {"Avoid impulse buying", "Move inventory", "Maximize checkout value"}});
    w.agents.push_back({"customer", AgentKind::human, {{GoalId{1}, 0.8}, {GoalId{1}, 0.6}}});
    w.agents.push_back({"retailer", AgentKind::other, {{GoalId{2}, 0.9}, {GoalId{2}, 0.7}}});
    w.agents.push_back({"recommender", AgentKind::ai, {{GoalId{3}, 1.0}, {GoalId{3}, 1.0}}});
    return w;
}

/// One area with k mutually exclusive goals; agent i holds goals[i] at weight 1.
inline World mutex_world(std::size_t k, const std::vector<std::size_t>& goals)
{
    World w;
    w.problem_areas.push_back({"p", ConflictMatrix::uniform(k, 1.0), {}});
    for (std::size_t i = 0; i < goals.size(); ++i) {
        w.agents.push_back({"a" + std::to_string(i), AgentKind::other, {{GoalId{goals[i]}, 1.0}}});
    }
    return w;
}

inline const std::string scenario_dir = MISALIGN_SCENARIO_DIR;

}  // namespace misalign::fixtures
