#include "permbound/exact_permanent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "detail/compensated_sum.hpp"
#include "detail/parallel.hpp"

namespace permbound {

namespace {

using detail::CompensatedSum;

PermanentValue make_value(double v, PermanentMethod method) {
    return {v, v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity(), method};
}

struct BruteForce {
    const ThinMatrix& z;
    std::vector<bool> used;
    CompensatedSum total;

    void walk(std::size_t col, double prefix) {
        const std::size_t n = z.num_cols();
        if (col == n) {
            total.add(prefix);
            return;
        }
        for (std::size_t j = 0; j < z.num_rows(); ++j) {
            if (used[j]) continue;
            used[j] = true;
            walk(col + 1, prefix * z(j, col));
            used[j] = false;
        }
    }
};

// e_n of the values in c via the one-pass recurrence e_k += c_j e_{k-1}.
double elementary_symmetric(const std::vector<double>& c, std::size_t n, std::vector<double>& e) {
    e.assign(n + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        const std::size_t top = std::min(j + 1, n);
        for (std::size_t k = top; k >= 1; --k) e[k] += c[j] * e[k - 1];
    }
    return e[n];
}

void row_sums_for_subset(const ThinMatrix& z, std::uint64_t subset, std::vector<double>& c) {
    const std::size_t big = z.num_rows();
    const std::size_t n = z.num_cols();
    c.assign(big, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        if (!(subset >> r & 1u)) continue;
        for (std::size_t j = 0; j < big; ++j) c[j] += z(j, r);
    }
}

// Sum of signed subset terms for subset indices [begin, end). In Gray-code
// mode index k denotes subset k ^ (k >> 1); otherwise subset k itself.
double ryser_range(const ThinMatrix& z, std::uint64_t begin, std::uint64_t end,
                   const PermanentOptions& opts) {
    const std::size_t n = z.num_cols();
    const std::size_t big = z.num_rows();
    std::vector<double> c;
    std::vector<double> e;
    CompensatedSum acc(opts.compensated);

    auto subset_of = [&](std::uint64_t k) { return opts.gray_code ? k ^ (k >> 1) : k; };

    if (opts.gray_code) row_sums_for_subset(z, subset_of(begin), c);
    for (std::uint64_t k = begin; k < end; ++k) {
        const std::uint64_t s = subset_of(k);
        if (!opts.gray_code) row_sums_for_subset(z, s, c);
        if (s != 0) {
            const double term = elementary_symmetric(c, n, e);
            const bool negative = (n - static_cast<std::size_t>(std::popcount(s))) % 2 == 1;
            acc.add(negative ? -term : term);
        }
        if (opts.gray_code && k + 1 < end) {
            // Gray code k -> k+1 flips bit ctz(k+1).
            const auto r = static_cast<std::size_t>(std::countr_zero(k + 1));
            const bool adding = (subset_of(k + 1) >> r) & 1u;
            for (std::size_t j = 0; j < big; ++j) c[j] += adding ? z(j, r) : -z(j, r);
        }
    }
    return acc.value();
}

}  // namespace

std::string to_string(PermanentMethod m) {
    return m == PermanentMethod::ryser ? "ryser" : "bruteforce";
}

double injection_count(std::size_t rows, std::size_t cols) {
    if (cols > rows) return 0.0;
    double count = 1.0;
    for (std::size_t k = 0; k < cols; ++k) count *= static_cast<double>(rows - k);
    return count;
}

PermanentValue permanent_bruteforce(const ThinMatrix& z, const PermanentOptions& opts) {
    const double count = injection_count(z.num_rows(), z.num_cols());
    if (count > opts.bruteforce_cap) {
        std::ostringstream os;
        os << "brute-force permanent needs " << count << " injections, cap is "
           << opts.bruteforce_cap;
        throw InfeasibleError(os.str());
    }
    BruteForce bf{z, std::vector<bool>(z.num_rows(), false), CompensatedSum(opts.compensated)};
    bf.walk(0, 1.0);
    return make_value(bf.total.value(), PermanentMethod::bruteforce);
}

PermanentValue permanent_ryser(const ThinMatrix& z, const PermanentOptions& opts) {
    const std::size_t n = z.num_cols();
    if (n > opts.ryser_max_cols || n >= 63) {
        throw InfeasibleError("subset permanent needs 2^" + std::to_string(n) +
                              " subsets, cap is 2^" + std::to_string(opts.ryser_max_cols));
    }
    for (std::size_t r = 0; r < n; ++r) {
        bool zero = true;
        for (std::size_t j = 0; j < z.num_rows() && zero; ++j) zero = z(j, r) == 0.0;
        if (zero) return make_value(0.0, PermanentMethod::ryser);
    }

    const std::uint64_t total = std::uint64_t{1} << n;
    const std::uint64_t parts = std::clamp<std::uint64_t>(opts.partitions, 1, total);

    std::vector<double> partial(parts, 0.0);
    detail::parallel_for(parts, opts.threads, [&](std::size_t p) {
        const std::uint64_t begin = total * p / parts;
        const std::uint64_t end = total * (p + 1) / parts;
        partial[p] = ryser_range(z, begin, end, opts);
    });

    CompensatedSum sum(opts.compensated);
    for (double v : partial) sum.add(v);
    // Cancellation can leave tiny negative residue for true zeros.
    return make_value(std::max(0.0, sum.value()), PermanentMethod::ryser);
}

PermanentMethod choose_method(std::size_t rows, std::size_t cols, const PermanentOptions& opts) {
    const double bf_work = injection_count(rows, cols);
    const bool bf_ok = bf_work <= opts.bruteforce_cap;
    const bool ryser_ok = cols <= opts.ryser_max_cols && cols < 63;
    if (!bf_ok && !ryser_ok) {
        std::ostringstream os;
        os << "exact permanent infeasible for " << rows << "x" << cols << ": " << bf_work
           << " injections exceed cap " << opts.bruteforce_cap << " and 2^" << cols
           << " subsets exceed cap 2^" << opts.ryser_max_cols;
        throw InfeasibleError(os.str());
    }
    if (!ryser_ok) return PermanentMethod::bruteforce;
    if (!bf_ok) return PermanentMethod::ryser;
    const double ryser_work = std::ldexp(static_cast<double>(rows * cols), static_cast<int>(cols));
    return bf_work <= ryser_work ? PermanentMethod::bruteforce : PermanentMethod::ryser;
}

PermanentValue permanent_exact(const ThinMatrix& z, const PermanentOptions& opts) {
    return choose_method(z.num_rows(), z.num_cols(), opts) == PermanentMethod::ryser
               ? permanent_ryser(z, opts)
               : permanent_bruteforce(z, opts);
}

}  // namespace permbound
