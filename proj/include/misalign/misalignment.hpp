#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "misalign/core_model.hpp"

namespace misalign {

enum class ScoreMethod { exact_unweighted, exact_weighted, mutex_closed_form };

struct AreaScore {
    std::size_t area = 0;
    double value = 0.0;
    ScoreMethod method = ScoreMethod::exact_weighted;
};

// Pair kernels. Both enumerate every ordered pair (a1, a2), a1 != a2, with a1
// ascending in the outer loop and a2 ascending in the inner loop, so the
// floating-point sum is reproducible. Pairs with zero conflict add exactly 0
// and are skipped.

/// Sum over ordered distinct pairs of c(g1, g2).
template <typename ConflictDerived, typename GoalDerived>
typename ConflictDerived::Scalar pairwise_conflict_sum(const Eigen::MatrixBase<ConflictDerived>& conflict,
                                                       const Eigen::MatrixBase<GoalDerived>& goals)
{
    using Scalar = typename ConflictDerived::Scalar;
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> c = conflict;
    const Eigen::Index n = goals.size();
    Scalar sum(0);
    for (Eigen::Index a1 = 0; a1 < n; ++a1) {
        const auto g1 = goals(a1);
        for (Eigen::Index a2 = 0; a2 < n; ++a2) {
            if (a1 == a2) continue;
            const Scalar value = c(g1, goals(a2));
            if (value != Scalar(0)) sum += value;
        }
    }
    return sum;
}

/// Sum over ordered distinct pairs of c(g1, g2) * sqrt(w1 * w2).
template <typename ConflictDerived, typename GoalDerived, typename WeightDerived>
typename ConflictDerived::Scalar pairwise_weighted_conflict_sum(
    const Eigen::MatrixBase<ConflictDerived>& conflict, const Eigen::MatrixBase<GoalDerived>& goals,
    const Eigen::MatrixBase<WeightDerived>& weights)
{
    using Scalar = typename ConflictDerived::Scalar;
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> c = conflict;
    const Eigen::Index n = goals.size();
    Scalar sum(0);
    for (Eigen::Index a1 = 0; a1 < n; ++a1) {
        const auto g1 = goals(a1);
        const Scalar w1 = weights(a1);
        for (Eigen::Index a2 = 0; a2 < n; ++a2) {
            if (a1 == a2) continue;
            const Scalar value = c(g1, goals(a2));
            if (value != Scalar(0)) {
                using std::sqrt;
                sum += value * sqrt(w1 * Scalar(weights(a2)));
            }
        }
    }
    return sum;
}

/// Number of ordered distinct pairs, n(n-1), as a floating-point divisor.
inline double ordered_pair_count(std::int64_t n) { return double(n) * double(n - 1); }

/// Exact expected conflict (optionally weighted) between two distinct agents
/// drawn uniformly from the population in one area.
AreaScore area_misalignment(const World& world, std::size_t area, bool weighted);

/// Closed form for mutually exclusive goals. `counts[g]` is the number of
/// agents holding non-zero goal g+1; `null_count` agents hold no goal.
AreaScore area_misalignment_mutex(std::span<const std::int64_t> counts, std::int64_t null_count = 0);

/// Arithmetic mean of the per-area scores.
MisalignmentReport overall_misalignment(const World& world, bool weighted);

/// n(k-1) / (k(n-1)): misalignment of n agents split evenly over k
/// mutually exclusive goals. Requires k | n.
double max_uniform_misalignment(std::int64_t n, std::int64_t k);

/// (k-1)/k, the large-population limit of `max_uniform_misalignment`.
double asymptotic_bound(std::int64_t k);

std::string to_string(ScoreMethod method);

}  // namespace misalign
