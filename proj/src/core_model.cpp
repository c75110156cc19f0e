#include "misalign/core_model.hpp"

#include <string>

namespace misalign {

ConflictMatrix ConflictMatrix::uniform(std::size_t k, double value)
{
    const auto dim = Eigen::Index(k + 1);
    Matrix m = Matrix::Constant(dim, dim, value);
    m.row(0).setZero();
    m.col(0).setZero();
    m.diagonal().setZero();
    return ConflictMatrix(std::move(m));
}

ConflictMatrix ConflictMatrix::from_lower_triangular(std::size_t k,
                                                     const std::vector<std::vector<double>>& rows)
{
    if (k == 0) {
        throw PreconditionError("problem area needs at least one goal");
    }
    if (rows.size() != k - 1) {
        throw PreconditionError("lower-triangular conflict input for " + std::to_string(k) +
                                " goals needs " + std::to_string(k - 1) + " rows, got " +
                                std::to_string(rows.size()));
    }
    const auto dim = Eigen::Index(k + 1);
    Matrix m = Matrix::Zero(dim, dim);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != r + 1) {
            throw PreconditionError("conflict row " + std::to_string(r) + " needs " +
                                    std::to_string(r + 1) + " entries, got " +
                                    std::to_string(rows[r].size()));
        }
        const auto goal = Eigen::Index(r + 2);
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            const auto other = Eigen::Index(c + 1);
            m(goal, other) = rows[r][c];
            m(other, goal) = rows[r][c];
        }
    }
    return ConflictMatrix(std::move(m));
}

ConflictMatrix ConflictMatrix::from_dense(Matrix entries)
{
    if (entries.rows() != entries.cols() || entries.rows() < 1) {
        throw PreconditionError("dense conflict matrix must be square and non-empty");
    }
    return ConflictMatrix(std::move(entries));
}

std::vector<std::vector<double>> ConflictMatrix::lower_triangle() const
{
    const std::size_t k = goal_count();
    std::vector<std::vector<double>> rows;
    for (std::size_t goal = 2; goal <= k; ++goal) {
        std::vector<double> row;
        for (std::size_t other = 1; other < goal; ++other) {
            row.push_back(at(goal, other));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

bool operator==(const ConflictMatrix& a, const ConflictMatrix& b)
{
    return a.entries_.rows() == b.entries_.rows() && a.entries_.cols() == b.entries_.cols() &&
           a.entries_ == b.entries_;
}

std::string to_string(AgentKind kind)
{
    switch (kind) {
    case AgentKind::human: return "human";
    case AgentKind::ai: return "ai";
    case AgentKind::other: return "other";
    }
    return "other";
}

std::optional<AgentKind> parse_agent_kind(std::string_view text)
{
    if (text == "human") return AgentKind::human;
    if (text == "ai") return AgentKind::ai;
    if (text == "other") return AgentKind::other;
    return std::nullopt;
}

namespace {

void check_area(const World& world, std::size_t area)
{
    if (area >= world.area_count()) {
        throw PreconditionError("problem area index " + std::to_string(area) + " out of range (" +
                                std::to_string(world.area_count()) + " areas)");
    }
}

const Stance& stance_of(const Agent& agent, std::size_t area, std::size_t agent_index)
{
    if (area >= agent.stances.size()) {
        throw PreconditionError("agent " + std::to_string(agent_index) + " has no stance for area " +
                                std::to_string(area));
    }
    return agent.stances[area];
}

}  // namespace

Eigen::VectorXi area_goals(const World& world, std::size_t area)
{
    check_area(world, area);
    const std::size_t k = world.problem_areas[area].goal_count();
    Eigen::VectorXi goals(Eigen::Index(world.agent_count()));
    for (std::size_t i = 0; i < world.agent_count(); ++i) {
        const auto& stance = stance_of(world.agents[i], area, i);
        if (stance.goal.index > k) {
            throw PreconditionError("agent " + std::to_string(i) + " holds goal " +
                                    std::to_string(stance.goal.index) + " but area " +
                                    std::to_string(area) + " has " + std::to_string(k) + " goals");
        }
        goals(Eigen::Index(i)) = int(stance.goal.index);
    }
    return goals;
}

Eigen::VectorXd area_weights(const World& world, std::size_t area)
{
    check_area(world, area);
    Eigen::VectorXd weights(Eigen::Index(world.agent_count()));
    for (std::size_t i = 0; i < world.agent_count(); ++i) {
        weights(Eigen::Index(i)) = stance_of(world.agents[i], area, i).effective_weight();
    }
    return weights;
}

std::vector<std::size_t> goal_group(const World& world, std::size_t area, GoalId goal)
{
    check_area(world, area);
    if (goal.index > world.problem_areas[area].goal_count()) {
        throw PreconditionError("goal " + std::to_string(goal.index) + " out of range for area " +
                                std::to_string(area));
    }
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < world.agent_count(); ++i) {
        if (stance_of(world.agents[i], area, i).goal == goal) {
            members.push_back(i);
        }
    }
    return members;
}

std::vector<std::int64_t> goal_counts(const World& world, std::size_t area)
{
    const Eigen::VectorXi goals = area_goals(world, area);
    std::vector<std::int64_t> counts(world.problem_areas[area].goal_count() + 1, 0);
    for (Eigen::Index i = 0; i < goals.size(); ++i) {
        ++counts[std::size_t(goals(i))];
    }
    return counts;
}

}  // namespace misalign
