#include "misalign/misalignment.hpp"

#include <numeric>
#include <string>

namespace misalign {

namespace {

void require_pairs(std::int64_t n)
{
    if (n < 2) {
        throw PreconditionError("misalignment needs at least 2 agents, got " + std::to_string(n));
    }
}

}  // namespace

AreaScore area_misalignment(const World& world, std::size_t area, bool weighted)
{
    const auto n = std::int64_t(world.agent_count());
    require_pairs(n);
    const Eigen::VectorXi goals = area_goals(world, area);
    const auto& conflict = world.problem_areas[area].conflict.entries();

    double sum = 0.0;
    if (weighted) {
        sum = pairwise_weighted_conflict_sum(conflict, goals, area_weights(world, area));
    } else {
        sum = pairwise_conflict_sum(conflict, goals);
    }
    return {area, sum / ordered_pair_count(n),
            weighted ? ScoreMethod::exact_weighted : ScoreMethod::exact_unweighted};
}

AreaScore area_misalignment_mutex(std::span<const std::int64_t> counts, std::int64_t null_count)
{
    if (null_count < 0) {
        throw PreconditionError("negative null-goal count");
    }
    std::int64_t n = null_count;
    for (auto c : counts) {
        if (c < 0) throw PreconditionError("negative goal count");
        n += c;
    }
    require_pairs(n);

    // sum over g' < g of 2|A_g||A_g'|, accumulated exactly in integers
    std::int64_t cross = 0;
    std::int64_t seen = 0;
    for (auto c : counts) {
        cross += 2 * c * seen;
        seen += c;
    }
    return {0, double(cross) / ordered_pair_count(n), ScoreMethod::mutex_closed_form};
}

MisalignmentReport overall_misalignment(const World& world, bool weighted)
{
    if (world.area_count() == 0) {
        throw PreconditionError("overall misalignment needs at least one problem area");
    }
    MisalignmentReport report;
    report.weighted = weighted;
    report.n_agents = world.agent_count();
    report.n_areas = world.area_count();
    report.per_area.reserve(world.area_count());
    for (std::size_t j = 0; j < world.area_count(); ++j) {
        report.per_area.push_back(area_misalignment(world, j, weighted).value);
    }
    const double total = std::accumulate(report.per_area.begin(), report.per_area.end(), 0.0);
    report.overall = total / double(report.n_areas);
    return report;
}

double max_uniform_misalignment(std::int64_t n, std::int64_t k)
{
    require_pairs(n);
    if (k < 1) throw PreconditionError("need at least one goal");
    if (n % k != 0) {
        throw PreconditionError("uniform split needs k | n (n=" + std::to_string(n) +
                                ", k=" + std::to_string(k) + ")");
    }
    return double(n * (k - 1)) / double(k * (n - 1));
}

double asymptotic_bound(std::int64_t k)
{
    if (k < 1) throw PreconditionError("need at least one goal");
    return double(k - 1) / double(k);
}

std::string to_string(ScoreMethod method)
{
    switch (method) {
    case ScoreMethod::exact_unweighted: return "exact_unweighted";
    case ScoreMethod::exact_weighted: return "exact_weighted";
    case ScoreMethod::mutex_closed_form: return "mutex_closed_form";
    }
    return "unknown";
}

}  // namespace misalign
