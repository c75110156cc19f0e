#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "misalign/core_model.hpp"
#include "misalign/rng.hpp"

namespace misalign {

/// Invalid generator spec; the message starts with the offending field path.
class SpecError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct ValueRange {
    double min = 0.0;
    double max = 1.0;
    friend bool operator==(const ValueRange&, const ValueRange&) = default;
};

struct WorldSpec {
    struct Randomize {
        bool conflict = true;
        bool goals = true;
        bool weights = true;
        friend bool operator==(const Randomize&, const Randomize&) = default;
    };
    struct Ranges {
        ValueRange conflict;
        ValueRange weights;
        friend bool operator==(const Ranges&, const Ranges&) = default;
    };
    struct Presets {
        // Per area: lower-triangular rows (k-1 rows of length 1..k-1) or a
        // full symmetric k x k grid over goals 1..k.
        std::optional<std::vector<std::vector<std::vector<double>>>> conflict;
        std::optional<std::vector<std::vector<std::size_t>>> goals;  // [agent][area]
        std::optional<std::vector<std::vector<double>>> weights;     // [agent][area]
        friend bool operator==(const Presets&, const Presets&) = default;
    };

    std::size_t areas = 1;
    std::size_t agents = 0;
    std::vector<std::size_t> goals_per_area{1};
    Randomize randomize;
    Ranges ranges;
    Presets presets;
    bool allow_null_goals = false;
    std::uint64_t seed = 0;

    friend bool operator==(const WorldSpec&, const WorldSpec&) = default;
};

/// Throws SpecError naming the first invalid field.
void validate_spec(const WorldSpec& spec);

/// Problem areas with their conflict matrices, then `add_agents`. Draw order:
/// areas ascending, goal pairs (k, l > k) ascending, then agents ascending
/// with goal before weight inside each (agent, area).
World init_world(const WorldSpec& spec, RngStream& rng);
World init_world(const WorldSpec& spec);

/// Appends `spec.agents` agents to `world`.
World add_agents(World world, const WorldSpec& spec, RngStream& rng);

}  // namespace misalign
