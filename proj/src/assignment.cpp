#include "permbound/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace permbound {

namespace {

constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();

// Hungarian costs live in an ordered group of triples compared
// lexicographically: (blocked picks, +inf picks, finite cost). Blocked picks
// are constraint violations; +inf picks are zero likelihoods. Neither is
// ever replaced by a large finite number.
struct Key {
    long long blocked = 0;
    long long infinite = 0;
    double finite = 0.0;

    friend Key operator+(Key a, const Key& b) {
        return {a.blocked + b.blocked, a.infinite + b.infinite, a.finite + b.finite};
    }
    friend Key operator-(Key a, const Key& b) {
        return {a.blocked - b.blocked, a.infinite - b.infinite, a.finite - b.finite};
    }
    friend bool operator<(const Key& a, const Key& b) {
        if (a.blocked != b.blocked) return a.blocked < b.blocked;
        if (a.infinite != b.infinite) return a.infinite < b.infinite;
        return a.finite < b.finite;
    }
};

constexpr Key kUnreached{1LL << 40, 0, 0.0};

// Shortest-augmenting-path Hungarian method for rows <= cols.
std::vector<std::size_t> hungarian(const std::vector<Key>& a, std::size_t rows, std::size_t cols) {
    std::vector<Key> u(rows + 1), v(cols + 1), minv(cols + 1);
    std::vector<std::size_t> p(cols + 1, 0), way(cols + 1, 0);
    std::vector<bool> used(cols + 1);

    for (std::size_t i = 1; i <= rows; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), kUnreached);
        std::fill(used.begin(), used.end(), false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            Key delta = kUnreached;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= cols; ++j) {
                if (used[j]) continue;
                const Key cur = a[(i0 - 1) * cols + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= cols; ++j) {
                if (used[j]) {
                    u[p[j]] = u[p[j]] + delta;
                    v[j] = v[j] - delta;
                } else {
                    minv[j] = minv[j] - delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> row_to_col(rows, kFree);
    for (std::size_t j = 1; j <= cols; ++j)
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

// Fixed picks and forbidden pairs restricting a subproblem.
struct Constraints {
    std::vector<std::size_t> fixed;  // per row, kFree if unconstrained
    std::vector<bool> forbidden;     // rows * cols

    Constraints(std::size_t rows, std::size_t cols) : fixed(rows, kFree), forbidden(rows * cols) {}
};

class Solver {
public:
    explicit Solver(const CostMatrix& c) : c_(c), rows_(c.rows()), cols_(c.cols()) {}

    [[nodiscard]] bool allowed(const Constraints& k, std::size_t i, std::size_t j) const {
        if (k.forbidden[i * cols_ + j]) return false;
        if (k.fixed[i] != kFree) return k.fixed[i] == j;
        for (std::size_t r = 0; r < rows_; ++r)
            if (r != i && k.fixed[r] == j) return false;
        return true;
    }

    // Minimum under (RankKey, lexicographic row_to_col) subject to the
    // constraints, or nullopt if every completion violates them.
    [[nodiscard]] std::optional<std::vector<std::size_t>> best(Constraints k) const {
        auto sol = solve(k);
        if (!sol) return std::nullopt;
        RankKey best_key = rank_key(c_, *sol);

        // Lexicographic refinement: fix rows in order to the smallest column
        // that still admits an optimal completion.
        for (std::size_t i = 0; i < rows_; ++i) {
            if (k.fixed[i] != kFree) continue;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (j == (*sol)[i]) break;
                if (!allowed(k, i, j)) continue;
                Constraints trial = k;
                trial.fixed[i] = j;
                auto alt = solve(trial);
                if (!alt) continue;
                const RankKey alt_key = rank_key(c_, *alt);
                if (alt_key <= best_key) {
                    best_key = alt_key;
                    sol = std::move(alt);
                    break;
                }
            }
            k.fixed[i] = (*sol)[i];
        }
        return sol;
    }

private:
    [[nodiscard]] std::optional<std::vector<std::size_t>> solve(const Constraints& k) const {
        std::vector<Key> a(rows_ * cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                Key& e = a[i * cols_ + j];
                if (!allowed(k, i, j)) {
                    e.blocked = 1;
                } else if (std::isinf(c_(i, j))) {
                    e.infinite = 1;
                } else {
                    e.finite = c_(i, j);
                }
            }
        }
        auto sol = hungarian(a, rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            if (!allowed(k, i, sol[i])) return std::nullopt;
        return sol;
    }

    const CostMatrix& c_;
    std::size_t rows_;
    std::size_t cols_;
};

void check_wide(const CostMatrix& c) {
    if (c.rows() < 1 || c.rows() > c.cols()) {
        throw MatrixError("assignment needs 1 <= rows <= cols, got " + std::to_string(c.rows()) +
                          "x" + std::to_string(c.cols()));
    }
}

Assignment make_assignment(const WideMatrix& l, const CostMatrix& c, std::vector<std::size_t> sol) {
    Assignment a;
    a.weight = 1.0;
    a.cost = 0.0;
    for (std::size_t i = 0; i < sol.size(); ++i) {
        a.weight *= l(i, sol[i]);
        a.cost += c(i, sol[i]);
    }
    a.row_to_col = std::move(sol);
    return a;
}

KBestResult with_cumulative(std::vector<Assignment> list) {
    KBestResult r;
    r.cumulative_weights.reserve(list.size());
    double running = 0.0;
    for (const auto& a : list) {
        running += a.weight;
        r.cumulative_weights.push_back(running);
    }
    r.assignments = std::move(list);
    return r;
}

}  // namespace

RankKey rank_key(const CostMatrix& c, const std::vector<std::size_t>& row_to_col) {
    RankKey k;
    for (std::size_t i = 0; i < row_to_col.size(); ++i) {
        const double v = c(i, row_to_col[i]);
        if (std::isinf(v)) {
            ++k.infinite;
        } else {
            k.finite += v;
        }
    }
    return k;
}

Assignment munkres(const CostMatrix& c) {
    check_wide(c);
    const Solver solver(c);
    auto sol = solver.best(Constraints(c.rows(), c.cols()));
    if (!sol || rank_key(c, *sol).infinite > 0) {
        throw InfeasibleError("no assignment avoids every +inf cost");
    }
    Assignment a;
    a.cost = rank_key(c, *sol).finite;
    a.weight = std::exp(-a.cost);
    a.row_to_col = std::move(*sol);
    return a;
}

KBestResult murty_kbest(const WideMatrix& l, std::size_t k, const KBestOptions& opts) {
    const CostMatrix c = neg_log_cost(l.matrix());
    const std::size_t rows = c.rows();
    const std::size_t cols = c.cols();
    const Solver solver(c);

    struct Node {
        Constraints cons;
        std::vector<std::size_t> sol;
        RankKey key;
    };
    auto worse = [](const Node& a, const Node& b) {
        if (a.key != b.key) return b.key < a.key;
        return b.sol < a.sol;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);

    auto admissible = [&](const RankKey& key) { return opts.include_zero_weight || key.infinite == 0; };

    Constraints root(rows, cols);
    auto first = solver.best(root);
    if (!first || !admissible(rank_key(c, *first))) {
        throw InfeasibleError("no positive-weight association hypothesis exists");
    }
    open.push(Node{std::move(root), *first, rank_key(c, *first)});

    std::vector<Assignment> out;
    while (!open.empty() && out.size() < k) {
        Node node = open.top();
        open.pop();
        out.push_back(make_assignment(l, c, node.sol));
        if (out.size() == k) break;

        // Partition the rest of this node's space: child i keeps rows < i on
        // the popped solution and forbids row i's pick.
        Constraints base = node.cons;
        for (std::size_t i = 0; i < rows; ++i) {
            if (base.fixed[i] == kFree) {
                Constraints child = base;
                child.forbidden[i * cols + node.sol[i]] = true;
                if (auto s = solver.best(child)) {
                    const RankKey key = rank_key(c, *s);
                    if (admissible(key)) open.push(Node{std::move(child), std::move(*s), key});
                }
            }
            base.fixed[i] = node.sol[i];
        }
    }
    return with_cumulative(std::move(out));
}

KBestResult enumerate_all(const WideMatrix& l, double cap) {
    const std::size_t rows = l.num_rows();
    const std::size_t cols = l.num_cols();
    const double count = injection_count(cols, rows);
    if (count > cap) {
        std::ostringstream os;
        os << "enumeration needs " << count << " hypotheses, cap is " << cap;
        throw InfeasibleError(os.str());
    }
    const CostMatrix c = neg_log_cost(l.matrix());

    std::vector<Assignment> all;
    all.reserve(static_cast<std::size_t>(count));
    std::vector<std::size_t> cur(rows);
    std::vector<bool> used(cols, false);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == rows) {
            all.push_back(make_assignment(l, c, cur));
            return;
        }
        for (std::size_t j = 0; j < cols; ++j) {
            if (used[j]) continue;
            used[j] = true;
            cur[i] = j;
            self(self, i + 1);
            used[j] = false;
        }
    };
    rec(rec, 0);

    std::vector<RankKey> keys;
    keys.reserve(all.size());
    for (const auto& a : all) keys.push_back(rank_key(c, a.row_to_col));
    std::vector<std::size_t> order(all.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (keys[a] != keys[b]) return keys[a] < keys[b];
        return all[a].row_to_col < all[b].row_to_col;
    });
    std::vector<Assignment> sorted;
    sorted.reserve(all.size());
    for (std::size_t i : order) sorted.push_back(std::move(all[i]));
    return with_cumulative(std::move(sorted));
}

}  // namespace permbound
