#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "permbound/exact_permanent.hpp"
#include "permbound/matrix.hpp"

namespace permbound {

/// One association hypothesis: row i picks column row_to_col[i].
struct Assignment {
    std::vector<std::size_t> row_to_col;
    double weight = 0.0;  ///< product of picked likelihoods
    double cost = 0.0;    ///< sum of picked neg-log costs, +inf if any pick is forbidden
};

struct KBestResult {
    std::vector<Assignment> assignments;
    std::vector<double> cumulative_weights;
};

/// Total order used everywhere hypotheses are ranked: fewer forbidden
/// (+inf) picks first, then smaller finite cost summed in row order, then
/// the lexicographically smaller row_to_col.
struct RankKey {
    std::size_t infinite = 0;
    double finite = 0.0;

    friend auto operator<=>(const RankKey&, const RankKey&) = default;
};

[[nodiscard]] RankKey rank_key(const CostMatrix& c, const std::vector<std::size_t>& row_to_col);

/// Optimal assignment of every row to a distinct column (rows <= cols),
/// minimising total cost. Among optima the lexicographically smallest
/// row_to_col is returned. Throws InfeasibleError if every full assignment
/// hits a +inf entry.
[[nodiscard]] Assignment munkres(const CostMatrix& c);

struct KBestOptions {
    /// Also rank hypotheses that pick a zero likelihood (after all positive ones).
    bool include_zero_weight = false;
};

/// K best hypotheses by weight via Murty's partitioning, each subproblem
/// solved by munkres. Order is RankKey; throws InfeasibleError when no
/// positive-weight hypothesis exists.
[[nodiscard]] KBestResult murty_kbest(const WideMatrix& l, std::size_t k,
                                      const KBestOptions& opts = {});

/// Every injection row -> column, sorted by RankKey. Throws InfeasibleError
/// when the count exceeds `cap`.
[[nodiscard]] KBestResult enumerate_all(const WideMatrix& l, double cap = 1e7);

}  // namespace permbound
