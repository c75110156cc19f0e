#pragma once

#include <string>
#include <vector>

#include "misalign/core_model.hpp"

namespace misalign {

enum class ViolationKind {
    no_goals,                  // area with k < 1
    asymmetric_conflict,       // c(x,y) != c(y,x)
    nonzero_diagonal,          // c(x,x) != 0
    null_goal_conflict,        // c(0,y) != 0
    conflict_out_of_range,     // entry outside [0,1] or not finite
    label_count_mismatch,      // goal_labels present but not one per goal
    stance_count_mismatch,     // agent stances != area count
    goal_out_of_range,         // stance goal > k
    weight_out_of_range,       // stance weight outside [0,1] or not finite
    too_few_agents,            // warning: n < 2, scoring undefined
    more_goals_than_agents,    // warning: k > n
};

enum class Severity { error, warning };

struct Violation {
    ViolationKind kind;
    Severity severity;
    std::string path;     // e.g. "problem_areas[1].conflict[2][3]"
    std::string message;
};

std::string to_string(ViolationKind kind);

/// Every invariant violation in `world`. Errors make the world unusable for
/// scoring; warnings flag scoring preconditions and soft constraints.
std::vector<Violation> validate_world(const World& world);

bool has_errors(const std::vector<Violation>& violations);

}  // namespace misalign
