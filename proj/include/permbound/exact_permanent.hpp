#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "permbound/matrix.hpp"

namespace permbound {

/// An exact method was asked to run past its configured work cap.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class PermanentMethod { bruteforce, ryser };

[[nodiscard]] std::string to_string(PermanentMethod m);

struct PermanentValue {
    double value = 0.0;
    double log_value = 0.0;  ///< -inf when value == 0
    PermanentMethod method = PermanentMethod::bruteforce;
};

struct PermanentOptions {
    /// Largest N!/(N-n)! the brute-force enumerator will walk.
    double bruteforce_cap = 1e8;
    /// Largest column count n for the subset method (2^n subsets).
    std::size_t ryser_max_cols = 24;
    /// Compensated summation of the alternating subset terms.
    bool compensated = true;
    /// Walk subsets in Gray-code order with incremental column sums;
    /// false recomputes every subset's sums from scratch.
    bool gray_code = true;
    /// Number of contiguous subset-index partitions. Each partition is summed
    /// independently and the partials are combined in partition order, so the
    /// result depends on this count but not on the thread count.
    unsigned partitions = 16;
    /// Worker threads used to evaluate partitions (capped at `partitions`).
    unsigned threads = 1;
};

/// Number of injections N!/(N-n)! as a double (may be inf for huge inputs).
[[nodiscard]] double injection_count(std::size_t rows, std::size_t cols);

/// Sum over all injective column-to-row maps of the product of the picked
/// entries. Depth-first enumeration with prefix products.
[[nodiscard]] PermanentValue permanent_bruteforce(const ThinMatrix& z,
                                                  const PermanentOptions& opts = {});

/// Inclusion-exclusion over subsets of the n columns (the short side):
///
///   per(Z) = sum_{S subset of cols} (-1)^(n-|S|) e_n(c^S),
///   c^S_j  = sum_{r in S} z_{j,r},
///
/// where e_n is the n-th elementary symmetric polynomial of the N row sums
/// c^S. Cost O(2^n N n), exponential only in the smaller dimension.
[[nodiscard]] PermanentValue permanent_ryser(const ThinMatrix& z,
                                             const PermanentOptions& opts = {});

/// Picks the cheaper method whose cap admits the input; throws
/// InfeasibleError when neither does.
[[nodiscard]] PermanentValue permanent_exact(const ThinMatrix& z,
                                             const PermanentOptions& opts = {});

/// The method permanent_exact would use, or throws InfeasibleError.
[[nodiscard]] PermanentMethod choose_method(std::size_t rows, std::size_t cols,
                                            const PermanentOptions& opts = {});

}  // namespace permbound
