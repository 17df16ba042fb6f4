#pragma once

#include <optional>
#include <vector>

#include "permbound/assignment.hpp"
#include "permbound/exact_permanent.hpp"
#include "permbound/roos.hpp"

namespace permbound {

/// How much probability mass the top-K hypotheses carry, bracketed by the
/// exact permanent (when affordable) and by the Roos interval.
struct TruncationReport {
    ApproxOrder order = ApproxOrder::second;
    KBestResult kbest;
    std::vector<std::size_t> k_values;        ///< 1..K
    std::vector<double> cumulative_weight;    ///< per K
    std::optional<double> permanent_exact;
    BoundedEstimate roos;
    RoosDiagnostics diagnostics;
    std::vector<double> mass_fraction_lower;  ///< cumulative / roos upper
    std::vector<double> mass_fraction_upper;  ///< min(1, cumulative / roos lower)
    /// False where the Roos lower endpoint is 0 or missing, so the upper
    /// fraction is pinned to 1 and carries no information.
    std::vector<bool> upper_informative;
    std::optional<std::vector<double>> mass_fraction_exact;
};

struct TruncationOptions {
    ApproxOrder order = ApproxOrder::second;
    bool with_exact = true;
    PermanentOptions permanent;
    RoosOptions roos;
    KBestOptions kbest;
};

[[nodiscard]] TruncationReport truncation_report(const WideMatrix& l, std::size_t k_max,
                                                 const TruncationOptions& opts = {});

/// Fractions from a cumulative weight and a Roos interval, per the report
/// conventions (lower fraction 0 without an upper bound; upper fraction 1
/// when the lower endpoint is 0 or missing).
struct MassBracket {
    double lower = 0.0;
    double upper = 1.0;
    bool upper_informative = false;
};

[[nodiscard]] MassBracket mass_bracket(double cumulative, const BoundedEstimate& roos);

}  // namespace permbound
