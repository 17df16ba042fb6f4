#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "permbound/matrix.hpp"

namespace permbound {

/// First- and second-order permanent approximations for thin nonnegative
/// matrices, with computable error bounds.
///
/// Notation (Z is N x n, N >= n):
///   z~_r     column means
///   p1       prod_r z~_r
///   p2       sum over column pairs {r,s} of prod_{k != r,s} z~_k
///            * sum_j (z_jr - z~_r)(z_js - z~_s)
///   beta     mean of z~_r^2
///   kappa_v  largest mean square of the entries left after deleting
///            v rows and v columns
///   theta_d  alpha_d-scaled norms of products of row differences
///            y_{j,k;r} = z_jr - z_kr
///
/// Estimates:
///   first  = N!/(N-n)! p1
///   second = N!/(N-n)! p1 - (N-2)!/(N-n)! p2
/// Half-widths (n >= 5):
///   first  : N!/(N-n)! theta_2/(2N) f_2(sqrt beta, sqrt kappa_2)
///   second : N!/(N-n)! (theta_3/(2N^2) f_3(sqrt beta, sqrt kappa_3)
///                       + theta_4/(8N^2) f_4(sqrt beta, sqrt kappa_4))

enum class ApproxOrder { first = 1, second = 2 };

[[nodiscard]] std::string to_string(ApproxOrder o);

struct RoosOptions {
    /// Use the factored theta evaluation instead of the definition-level loops.
    bool fast_theta = true;
    /// Workers for theta and kappa; results are bit-identical for any count.
    unsigned threads = 1;
};

/// Every intermediate quantity. Orders whose index sets are empty are simply
/// absent from the maps.
struct RoosDiagnostics {
    std::size_t rows = 0;  ///< N
    std::size_t cols = 0;  ///< n
    std::vector<double> col_sums;
    std::vector<double> col_means;
    double p1 = 1.0;
    double p2 = 0.0;
    double beta = 0.0;
    std::map<int, double> kappa;     ///< v in {2,3,4}, needs n > v
    std::map<int, double> theta;     ///< d in {2,3,4}, needs n >= d
    std::map<int, double> alpha;     ///< d in {2,3,4}, needs n >= d
    std::map<int, double> f_values;  ///< f_d(sqrt beta, sqrt kappa_d)
    double ff_ratio = 1.0;                 ///< N!/(N-n)!
    double log_ff_ratio = 0.0;
    std::optional<double> ff_ratio_2;      ///< (N-2)!/(N-n)!, n >= 2
};

struct BoundedEstimate {
    ApproxOrder order = ApproxOrder::first;
    double estimate = 0.0;
    /// Natural log of the estimate evaluated without forming N!/(N-n)! or p1
    /// directly; absent when the estimate is not positive.
    std::optional<double> log_estimate;
    /// Absent when no bound is available for this size.
    std::optional<double> half_width;
    double lower = 0.0;      ///< max(0, estimate - half_width), 0 without a bound
    double upper = 0.0;      ///< estimate + half_width, +inf without a bound
    double raw_lower = 0.0;  ///< estimate - half_width before clamping

    [[nodiscard]] bool has_bound() const noexcept { return half_width.has_value(); }
};

/// N!/(N-n)! as an incremental product; 1 for n == 0.
[[nodiscard]] double falling_factorial_ratio(std::size_t big_n, std::size_t n);
[[nodiscard]] double log_falling_factorial_ratio(std::size_t big_n, std::size_t n);

/// f_2, f_3, f_4 power sums; 0 when d > n, with 0^0 = 1.
[[nodiscard]] double eval_f(int d, std::size_t n, double x1, double x2);

/// (N-d)!/N! * sqrt((n-d)!/n!); absent when d > n.
[[nodiscard]] std::optional<double> alpha_constant(int d, std::size_t big_n, std::size_t n);

/// theta_d straight from its definition: O(n^d N^d).
[[nodiscard]] std::optional<double> theta_naive(const ThinMatrix& z, int d);
/// theta_d via pair-sum factorizations: O(n^d N^2).
[[nodiscard]] std::optional<double> theta_fast(const ThinMatrix& z, int d, unsigned threads = 1);

/// kappa_v for v in {2,3,4}; absent unless n > v and N > v.
[[nodiscard]] std::optional<double> kappa(const ThinMatrix& z, int v, unsigned threads = 1);

/// Quantities needed up to `order`: first skips theta/kappa/f for d = 3, 4.
[[nodiscard]] RoosDiagnostics diagnostics(const ThinMatrix& z, const RoosOptions& opts = {},
                                          ApproxOrder order = ApproxOrder::second);

[[nodiscard]] BoundedEstimate approx_first(const RoosDiagnostics& diag);
[[nodiscard]] BoundedEstimate approx_second(const RoosDiagnostics& diag);

[[nodiscard]] BoundedEstimate approx_first(const ThinMatrix& z, const RoosOptions& opts = {});
[[nodiscard]] BoundedEstimate approx_second(const ThinMatrix& z, const RoosOptions& opts = {});
[[nodiscard]] BoundedEstimate approx(const ThinMatrix& z, ApproxOrder order,
                                     const RoosOptions& opts = {});

}  // namespace permbound
