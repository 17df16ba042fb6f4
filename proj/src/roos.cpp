#include "permbound/roos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "detail/compensated_sum.hpp"
#include "detail/parallel.hpp"

namespace permbound {

namespace {

// All ordered d-tuples of distinct indices from [0, m), lexicographic.
std::vector<std::vector<std::size_t>> ordered_tuples(std::size_t m, std::size_t d) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    std::vector<bool> used(m, false);
    auto rec = [&](auto&& self) -> void {
        if (cur.size() == d) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (used[i]) continue;
            used[i] = true;
            cur.push_back(i);
            self(self);
            cur.pop_back();
            used[i] = false;
        }
    };
    rec(rec);
    return out;
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t m) {
    const std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;) {
        if (idx[i] < m - k + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<std::vector<std::size_t>> combinations(std::size_t m, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > m) return out;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    do {
        out.push_back(idx);
    } while (next_combination(idx, m));
    return out;
}

double ipow(double x, std::size_t e) {
    double r = 1.0;
    for (std::size_t i = 0; i < e; ++i) r *= x;
    return r;
}

// |y_{u,v;r}| for every unordered row pair u < v; pair-major layout.
struct PairDiffs {
    std::size_t big_n;
    std::size_t n;
    std::vector<std::size_t> first;
    std::vector<std::size_t> second;
    std::vector<double> absdiff;  // [pair * n + r]

    explicit PairDiffs(const ThinMatrix& z) : big_n(z.num_rows()), n(z.num_cols()) {
        for (std::size_t u = 0; u < big_n; ++u) {
            for (std::size_t v = u + 1; v < big_n; ++v) {
                first.push_back(u);
                second.push_back(v);
                for (std::size_t r = 0; r < n; ++r) absdiff.push_back(std::fabs(z(u, r) - z(v, r)));
            }
        }
    }
    [[nodiscard]] std::size_t pairs() const { return first.size(); }
    [[nodiscard]] double at(std::size_t p, std::size_t r) const { return absdiff[p * n + r]; }
};

// Per-row sums A_u = sum_{v != u} |y_{uv;r}| |y_{uv;s}| for one column pair.
std::vector<double> row_pair_sums(const PairDiffs& y, std::size_t r, std::size_t s) {
    std::vector<double> acc(y.big_n, 0.0);
    for (std::size_t p = 0; p < y.pairs(); ++p) {
        const double a = y.at(p, r) * y.at(p, s);
        acc[y.first[p]] += a;
        acc[y.second[p]] += a;
    }
    return acc;
}

double sum_in_order(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

double theta2_fast(const PairDiffs& y, unsigned threads) {
    const std::size_t n = y.n;
    std::vector<double> partial(n, 0.0);
    detail::parallel_for(n, threads, [&](std::size_t r) {
        double acc = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            if (s == r) continue;
            double g = 0.0;
            for (std::size_t p = 0; p < y.pairs(); ++p) g += y.at(p, r) * y.at(p, s);
            g *= 2.0;  // (u,v) and (v,u)
            acc += g * g;
        }
        partial[r] = acc;
    });
    return sum_in_order(partial);
}

double theta3_fast(const PairDiffs& y, unsigned threads) {
    const std::size_t n = y.n;
    const std::size_t big_n = y.big_n;

    // T_u(t) = sum_{w != u} |y_{uw;t}|
    std::vector<double> tot(big_n * n, 0.0);
    for (std::size_t p = 0; p < y.pairs(); ++p) {
        for (std::size_t t = 0; t < n; ++t) {
            tot[y.first[p] * n + t] += y.at(p, t);
            tot[y.second[p] * n + t] += y.at(p, t);
        }
    }

    // Inner sum for distinct (r,s,t), symmetric in r,s:
    //   sum_u sum_{v != u} a_uv (T_u(t) - |y_{uv;t}|),  a_uv = |y_{uv;r} y_{uv;s}|
    // = sum_u A_u T_u(t) - 2 sum_{u<v} a_uv |y_{uv;t}|.
    const auto col_pairs = combinations(n, 2);
    std::vector<double> partial(col_pairs.size(), 0.0);
    detail::parallel_for(col_pairs.size(), threads, [&](std::size_t idx) {
        const std::size_t r = col_pairs[idx][0];
        const std::size_t s = col_pairs[idx][1];
        const std::vector<double> a_row = row_pair_sums(y, r, s);
        double acc = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            if (t == r || t == s) continue;
            double lead = 0.0;
            for (std::size_t u = 0; u < big_n; ++u) lead += a_row[u] * tot[u * n + t];
            double overlap = 0.0;
            for (std::size_t p = 0; p < y.pairs(); ++p) overlap += y.at(p, r) * y.at(p, s) * y.at(p, t);
            const double inner = lead - 2.0 * overlap;
            acc += inner * inner;
        }
        partial[idx] = 2.0 * acc;  // (r,s) and (s,r)
    });
    return sum_in_order(partial);
}

double theta4_fast(const PairDiffs& y, unsigned threads) {
    const std::size_t n = y.n;
    const std::size_t big_n = y.big_n;
    const auto col_pairs = combinations(n, 2);
    const std::size_t m = col_pairs.size();

    // For column pair (q,r): a_uv = |y_{uv;q} y_{uv;r}| over unordered row pairs,
    // per-row sums A_u, and total over ordered row pairs.
    std::vector<std::vector<double>> a(m), a_row(m);
    std::vector<double> a_total(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t q = col_pairs[k][0];
        const std::size_t r = col_pairs[k][1];
        a[k].resize(y.pairs());
        for (std::size_t p = 0; p < y.pairs(); ++p) a[k][p] = y.at(p, q) * y.at(p, r);
        a_row[k] = row_pair_sums(y, q, r);
        a_total[k] = sum_in_order(a_row[k]);
    }

    // Sum over ordered (u,v),(w,x) with u,v,w,x distinct of a_uv b_wx equals
    //   A B - 4 sum_u A_u B_u + 2 <a,b>_ordered
    // (pairs sharing exactly one index are removed four ways, pairs sharing
    // both indices were removed twice too many).
    std::vector<double> partial(m, 0.0);
    detail::parallel_for(m, threads, [&](std::size_t k) {
        const std::size_t q = col_pairs[k][0];
        const std::size_t r = col_pairs[k][1];
        double acc = 0.0;
        for (std::size_t l = 0; l < m; ++l) {
            const std::size_t s = col_pairs[l][0];
            const std::size_t t = col_pairs[l][1];
            if (s == q || s == r || t == q || t == r) continue;
            double shared_one = 0.0;
            for (std::size_t u = 0; u < big_n; ++u) shared_one += a_row[k][u] * a_row[l][u];
            double shared_two = 0.0;
            for (std::size_t p = 0; p < y.pairs(); ++p) shared_two += a[k][p] * a[l][p];
            const double inner = a_total[k] * a_total[l] - 4.0 * shared_one + 4.0 * shared_two;
            acc += inner * inner;
        }
        partial[k] = 4.0 * acc;  // q<->r and s<->t orderings
    });
    return sum_in_order(partial);
}

}  // namespace

std::string to_string(ApproxOrder o) { return o == ApproxOrder::first ? "first" : "second"; }

double falling_factorial_ratio(std::size_t big_n, std::size_t n) {
    double v = 1.0;
    for (std::size_t k = 0; k < n; ++k) v *= static_cast<double>(big_n - k);
    return v;
}

double log_falling_factorial_ratio(std::size_t big_n, std::size_t n) {
    double v = 0.0;
    for (std::size_t k = 0; k < n; ++k) v += std::log(static_cast<double>(big_n - k));
    return v;
}

double eval_f(int d, std::size_t n, double x1, double x2) {
    const auto nn = static_cast<double>(n);
    const auto dd = static_cast<std::size_t>(d);
    double sum = 0.0;
    for (std::size_t k = dd; k <= n; ++k) {
        const auto kk = static_cast<double>(k);
        double coef = 0.0;
        switch (d) {
        case 2: coef = kk - 1.0; break;
        case 3: coef = (nn + kk - 2.0) * (nn - kk + 1.0); break;
        case 4: coef = (kk - 3.0) * (nn + kk - 2.0) * (nn - kk + 1.0); break;
        default: return 0.0;
        }
        sum += coef * ipow(x1, n - k) * ipow(x2, k - dd);
    }
    return sum;
}

std::optional<double> alpha_constant(int d, std::size_t big_n, std::size_t n) {
    const auto dd = static_cast<std::size_t>(d);
    if (dd > n || dd > big_n) return std::nullopt;
    double rows_part = 1.0;
    double cols_part = 1.0;
    for (std::size_t k = 0; k < dd; ++k) {
        rows_part *= 1.0 / static_cast<double>(big_n - k);
        cols_part *= 1.0 / static_cast<double>(n - k);
    }
    return rows_part * std::sqrt(cols_part);
}

std::optional<double> theta_naive(const ThinMatrix& z, int d) {
    const std::size_t big_n = z.num_rows();
    const std::size_t n = z.num_cols();
    const auto alpha = alpha_constant(d, big_n, n);
    if (!alpha || d < 2 || d > 4) return std::nullopt;

    auto y = [&](std::size_t j, std::size_t k, std::size_t r) { return z(j, r) - z(k, r); };
    const auto outer = ordered_tuples(n, static_cast<std::size_t>(d));
    const auto inner = ordered_tuples(big_n, static_cast<std::size_t>(d));

    double total = 0.0;
    for (const auto& c : outer) {
        double s = 0.0;
        for (const auto& u : inner) {
            switch (d) {
            case 2:
                s += std::fabs(y(u[0], u[1], c[0]) * y(u[0], u[1], c[1]));
                break;
            case 3:
                s += std::fabs(y(u[0], u[1], c[0]) * y(u[0], u[1], c[1]) * y(u[0], u[2], c[2]));
                break;
            case 4:
                s += std::fabs(y(u[0], u[1], c[0]) * y(u[0], u[1], c[1]) * y(u[2], u[3], c[2]) *
                               y(u[2], u[3], c[3]));
                break;
            }
        }
        total += s * s;
    }
    return *alpha * std::sqrt(total);
}

std::optional<double> theta_fast(const ThinMatrix& z, int d, unsigned threads) {
    const auto alpha = alpha_constant(d, z.num_rows(), z.num_cols());
    if (!alpha || d < 2 || d > 4) return std::nullopt;
    const PairDiffs y(z);
    double total = 0.0;
    switch (d) {
    case 2: total = theta2_fast(y, threads); break;
    case 3: total = theta3_fast(y, threads); break;
    case 4: total = theta4_fast(y, threads); break;
    }
    return *alpha * std::sqrt(std::max(0.0, total));
}

std::optional<double> kappa(const ThinMatrix& z, int v, unsigned threads) {
    const std::size_t big_n = z.num_rows();
    const std::size_t n = z.num_cols();
    const auto nu = static_cast<std::size_t>(v);
    if (v < 2 || v > 4 || n <= nu || big_n <= nu) return std::nullopt;

    std::vector<double> sq(big_n * n);
    std::vector<double> rowsq(big_n, 0.0);
    std::vector<double> colsq(n, 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < big_n; ++j) {
        for (std::size_t r = 0; r < n; ++r) {
            const double s = z(j, r) * z(j, r);
            sq[j * n + r] = s;
            rowsq[j] += s;
            colsq[r] += s;
            total += s;
        }
    }

    // Sum of squares outside J x R, in fixed row-major order.
    auto remaining = [&](const std::vector<std::size_t>& rows_out,
                         const std::vector<std::size_t>& cols_out) {
        double s = 0.0;
        for (std::size_t j = 0, jj = 0; j < big_n; ++j) {
            if (jj < rows_out.size() && rows_out[jj] == j) {
                ++jj;
                continue;
            }
            for (std::size_t r = 0, rr = 0; r < n; ++r) {
                if (rr < cols_out.size() && cols_out[rr] == r) {
                    ++rr;
                    continue;
                }
                s += sq[j * n + r];
            }
        }
        return s;
    };

    // For fixed R, removed(J, R) = sum_{r in R} colsq_r + sum_{j in J} rowsq_j
    //                              - sum_{j in J, r in R} z_jr^2.
    // Subsets whose removed mass is within rounding of the minimum are
    // re-summed directly so the maximum matches the plain definition exactly.
    const double band = 1e-9 * total;
    const auto col_sets = combinations(n, nu);
    std::vector<double> best(col_sets.size(), 0.0);
    detail::parallel_for(col_sets.size(), threads, [&](std::size_t ci) {
        const auto& cols_out = col_sets[ci];
        double cols_removed = 0.0;
        for (std::size_t r : cols_out) cols_removed += colsq[r];
        std::vector<double> restricted(big_n);
        for (std::size_t j = 0; j < big_n; ++j) {
            double inter = 0.0;
            for (std::size_t r : cols_out) inter += sq[j * n + r];
            restricted[j] = rowsq[j] - inter;
        }

        double min_removed = std::numeric_limits<double>::infinity();
        std::vector<std::pair<double, std::vector<std::size_t>>> cands;
        std::vector<std::size_t> rows_out(nu);
        std::iota(rows_out.begin(), rows_out.end(), std::size_t{0});
        do {
            double removed = cols_removed;
            for (std::size_t j : rows_out) removed += restricted[j];
            if (removed <= min_removed + band) {
                if (removed < min_removed) {
                    min_removed = removed;
                    std::erase_if(cands, [&](const auto& c) { return c.first > min_removed + band; });
                }
                cands.emplace_back(removed, rows_out);
            }
        } while (next_combination(rows_out, big_n));

        double local = 0.0;
        for (const auto& c : cands) local = std::max(local, remaining(c.second, cols_out));
        best[ci] = local;
    });

    const double max_sum = *std::max_element(best.begin(), best.end());
    return max_sum / (static_cast<double>(n - nu) * static_cast<double>(big_n - nu));
}

RoosDiagnostics diagnostics(const ThinMatrix& z, const RoosOptions& opts, ApproxOrder order) {
    RoosDiagnostics d;
    const std::size_t big_n = z.num_rows();
    const std::size_t n = z.num_cols();
    d.rows = big_n;
    d.cols = n;

    d.col_sums.assign(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        detail::CompensatedSum s;
        for (std::size_t j = 0; j < big_n; ++j) s.add(z(j, r));
        d.col_sums[r] = s.value();
    }
    d.col_means.resize(n);
    for (std::size_t r = 0; r < n; ++r) d.col_means[r] = d.col_sums[r] / static_cast<double>(big_n);

    d.p1 = 1.0;
    for (double m : d.col_means) d.p1 *= m;

    d.p2 = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = r + 1; s < n; ++s) {
            double others = 1.0;
            for (std::size_t k = 0; k < n; ++k)
                if (k != r && k != s) others *= d.col_means[k];
            // Centered cross sum in row-difference form, so rows that agree
            // contribute exactly zero regardless of how the means round.
            double centered = 0.0;
            for (std::size_t j = 0; j < big_n; ++j)
                for (std::size_t k = j + 1; k < big_n; ++k)
                    centered += (z(j, r) - z(k, r)) * (z(j, s) - z(k, s));
            d.p2 += others * (centered / static_cast<double>(big_n));
        }
    }

    d.beta = 0.0;
    for (double m : d.col_means) d.beta += m * m;
    d.beta /= static_cast<double>(n);

    d.ff_ratio = falling_factorial_ratio(big_n, n);
    d.log_ff_ratio = log_falling_factorial_ratio(big_n, n);
    if (n >= 2) d.ff_ratio_2 = falling_factorial_ratio(big_n - 2, n - 2);

    const int top = order == ApproxOrder::first ? 2 : 4;
    for (int k = 2; k <= top; ++k) {
        if (auto a = alpha_constant(k, big_n, n)) d.alpha[k] = *a;
        auto th = opts.fast_theta ? theta_fast(z, k, opts.threads) : theta_naive(z, k);
        if (th) d.theta[k] = *th;
        if (auto kap = kappa(z, k, opts.threads)) {
            d.kappa[k] = *kap;
            d.f_values[k] = eval_f(k, n, std::sqrt(d.beta), std::sqrt(*kap));
        }
    }
    return d;
}

namespace {

BoundedEstimate finish(ApproxOrder order, double estimate, std::optional<double> log_estimate,
                       std::optional<double> half_width) {
    BoundedEstimate b;
    b.order = order;
    b.estimate = estimate;
    b.log_estimate = log_estimate;
    b.half_width = half_width;
    if (half_width) {
        b.raw_lower = estimate - *half_width;
        b.lower = std::max(0.0, b.raw_lower);
        b.upper = estimate + *half_width;
    } else {
        b.raw_lower = 0.0;
        b.lower = 0.0;
        b.upper = std::numeric_limits<double>::infinity();
    }
    return b;
}

bool bounds_defined(const RoosDiagnostics& d) { return d.cols >= 5; }

}  // namespace

BoundedEstimate approx_first(const RoosDiagnostics& d) {
    const std::size_t n = d.cols;
    const auto big_n = static_cast<double>(d.rows);

    // For n == 1 the estimate N * (s / N) is the column sum itself; use it
    // directly so the exact case is exact in floating point too.
    const double estimate = n == 1 ? d.col_sums[0] : d.ff_ratio * d.p1;

    std::optional<double> log_est;
    if (estimate > 0.0) {
        double lp1 = 0.0;
        for (double m : d.col_means) lp1 += std::log(m);
        log_est = d.log_ff_ratio + lp1;
    }

    std::optional<double> hw;
    if (n == 1) {
        hw = 0.0;
    } else if (bounds_defined(d)) {
        hw = d.ff_ratio * d.theta.at(2) / (2.0 * big_n) * d.f_values.at(2);
    }
    return finish(ApproxOrder::first, estimate, log_est, hw);
}

BoundedEstimate approx_second(const RoosDiagnostics& d) {
    const std::size_t n = d.cols;
    if (n < 2) {
        BoundedEstimate b = approx_first(d);
        b.order = ApproxOrder::second;
        return b;
    }
    const auto big_n = static_cast<double>(d.rows);
    const double estimate = d.ff_ratio * d.p1 - *d.ff_ratio_2 * d.p2;

    // log(est) = log (N-2)!/(N-n)! + log p1 + log(N(N-1) - p2/p1), with p2/p1
    // formed term by term to stay away from overflow in p1.
    std::optional<double> log_est;
    if (estimate > 0.0) {
        const bool means_positive =
            std::all_of(d.col_means.begin(), d.col_means.end(), [](double m) { return m > 0.0; });
        if (means_positive) {
            double lp1 = 0.0;
            for (double m : d.col_means) lp1 += std::log(m);
            const double ratio = d.p2 / d.p1;
            const double lead = big_n * (big_n - 1.0) - ratio;
            if (lead > 0.0 && std::isfinite(ratio)) {
                log_est = log_falling_factorial_ratio(d.rows - 2, n - 2) + lp1 + std::log(lead);
            }
        }
        if (!log_est) log_est = std::log(estimate);
    }

    std::optional<double> hw;
    if (n == 2) {
        // Both remainder index sets are empty: the estimate is the permanent.
        hw = 0.0;
    } else if (bounds_defined(d)) {
        const double n2 = big_n * big_n;
        hw = d.ff_ratio * (d.theta.at(3) / (2.0 * n2) * d.f_values.at(3) +
                           d.theta.at(4) / (8.0 * n2) * d.f_values.at(4));
    }
    return finish(ApproxOrder::second, estimate, log_est, hw);
}

BoundedEstimate approx_first(const ThinMatrix& z, const RoosOptions& opts) {
    return approx_first(diagnostics(z, opts, ApproxOrder::first));
}

BoundedEstimate approx_second(const ThinMatrix& z, const RoosOptions& opts) {
    return approx_second(diagnostics(z, opts, ApproxOrder::second));
}

BoundedEstimate approx(const ThinMatrix& z, ApproxOrder order, const RoosOptions& opts) {
    return order == ApproxOrder::first ? approx_first(z, opts) : approx_second(z, opts);
}

}  // namespace permbound
