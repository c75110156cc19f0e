#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace misalign {

/// Index of a goal within a problem area. 0 is the null goal (holding no
/// goal); 1..k are the area's non-zero goals.
struct GoalId {
    std::size_t index = 0;

    static constexpr GoalId null() { return GoalId{0}; }
    constexpr bool is_null() const { return index == 0; }
    friend constexpr bool operator==(GoalId, GoalId) = default;
};

/// Raised when an input violates a precondition of a scoring or bound
/// computation (too few agents, bad index, non-divisible split).
class PreconditionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Symmetric (k+1)x(k+1) matrix of goal-pair conflict probabilities.
///
/// Row and column 0 belong to the null goal. Construction from a lower
/// triangle mirrors the input and forces the diagonal and the null row to
/// zero. `from_dense` keeps the grid verbatim so that malformed inputs can be
/// reported by `validate_world` instead of silently repaired.
class ConflictMatrix {
  public:
    using Matrix = Eigen::MatrixXd;

    ConflictMatrix() = default;

    /// All distinct non-zero goal pairs conflict with `value`.
    static ConflictMatrix uniform(std::size_t k, double value);

    /// `rows[r]` holds c(g_{r+2}, g_1) .. c(g_{r+2}, g_{r+1}); k-1 rows total.
    static ConflictMatrix from_lower_triangular(std::size_t k,
                                                const std::vector<std::vector<double>>& rows);

    /// Full (k+1)x(k+1) grid stored as given.
    static ConflictMatrix from_dense(Matrix entries);

    std::size_t goal_count() const { return entries_.rows() > 0 ? std::size_t(entries_.rows()) - 1 : 0; }
    double operator()(GoalId a, GoalId b) const { return entries_(Eigen::Index(a.index), Eigen::Index(b.index)); }
    double at(std::size_t a, std::size_t b) const { return entries_(Eigen::Index(a), Eigen::Index(b)); }
    const Matrix& entries() const { return entries_; }

    /// Lower triangle among non-zero goals, in the layout `from_lower_triangular` accepts.
    std::vector<std::vector<double>> lower_triangle() const;

    friend bool operator==(const ConflictMatrix& a, const ConflictMatrix& b);

  private:
    explicit ConflictMatrix(Matrix entries) : entries_(std::move(entries)) {}
    Matrix entries_;
};

struct ProblemArea {
    std::string id;
    ConflictMatrix conflict;
    std::vector<std::string> goal_labels;  // empty, or one label per goal 1..k

    std::size_t goal_count() const { return conflict.goal_count(); }
    friend bool operator==(const ProblemArea&, const ProblemArea&) = default;
};

struct Stance {
    GoalId goal;
    double weight = 0.0;

    /// Weight used in scoring: the null goal always carries zero weight.
    double effective_weight() const { return goal.is_null() ? 0.0 : weight; }
    friend bool operator==(const Stance&, const Stance&) = default;
};

enum class AgentKind { human, ai, other };

std::string to_string(AgentKind kind);
std::optional<AgentKind> parse_agent_kind(std::string_view text);

struct Agent {
    std::string id;
    AgentKind kind = AgentKind::other;
    std::vector<Stance> stances;  // one per problem area

    friend bool operator==(const Agent&, const Agent&) = default;
};

struct World {
    std::vector<ProblemArea> problem_areas;
    std::vector<Agent> agents;

    std::size_t area_count() const { return problem_areas.size(); }
    std::size_t agent_count() const { return agents.size(); }
    friend bool operator==(const World&, const World&) = default;
};

/// Goal held by every agent in `area`, in agent order.
Eigen::VectorXi area_goals(const World& world, std::size_t area);

/// Effective (null-coerced) weight of every agent in `area`, in agent order.
Eigen::VectorXd area_weights(const World& world, std::size_t area);

/// Indices of the agents holding goal `goal` in `area`, ascending.
std::vector<std::size_t> goal_group(const World& world, std::size_t area, GoalId goal);

/// Per-goal agent counts for `area`; element 0 counts null-goal holders.
std::vector<std::int64_t> goal_counts(const World& world, std::size_t area);

struct MisalignmentReport {
    std::vector<double> per_area;
    double overall = 0.0;
    std::size_t n_agents = 0;
    std::size_t n_areas = 0;
    bool weighted = true;
};

}  // namespace misalign
