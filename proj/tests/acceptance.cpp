// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracles.hpp"
#include "permbound/assignment.hpp"
#include "permbound/bench.hpp"
#include "permbound/exact_permanent.hpp"
#include "permbound/roos.hpp"
#include "permbound/truncation.hpp"

using namespace permbound;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects failure notes; only the first few are kept for the summary line.
class Failures {
public:
    void add(const std::string& what) {
        if (count_++ < 3) notes_ += (notes_.empty() ? "" : "; ") + what;
    }
    [[nodiscard]] bool empty() const { return count_ == 0; }
    [[nodiscard]] std::string summary() const {
        return std::to_string(count_) + " failure(s): " + notes_;
    }

private:
    std::size_t count_ = 0;
    std::string notes_;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

double rel_err(double a, double b) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

ThinMatrix random_thin(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Sampler s(seed);
    return ThinMatrix(random_matrix(rows, cols, s));
}

bool contains(const BoundedEstimate& b, double exact) {
    const double slack = 1e-9 * std::max(std::fabs(b.lower), std::fabs(b.upper));
    return b.has_bound() && exact >= b.lower - slack && exact <= b.upper + slack;
}

Outcome oracle_equivalence() {
    Failures f;
    std::size_t count = 0;
    double worst = 0.0;
    std::uint64_t seed = 100000;
    while (count < 1000) {
        for (std::size_t n = 2; n <= 5; ++n) {
            for (std::size_t big_n = n; big_n <= 8; ++big_n, ++count, ++seed) {
                const auto z = random_thin(big_n, n, seed);
                const double r = permanent_ryser(z).value;
                const double b = permanent_bruteforce(z).value;
                const double e = rel_err(r, b);
                worst = std::max(worst, e);
                if (e > 1e-10) f.add("seed " + std::to_string(seed) + " rel err " + fmt(e));
            }
        }
    }
    if (!f.empty()) return {false, f.summary()};
    return {true, std::to_string(count) + " matrices, max rel err " + fmt(worst)};
}

Outcome bound_containment() {
    Failures f;
    std::size_t count = 0;
    std::size_t second_tighter = 0;
    std::uint64_t seed = 200000;
    while (count < 1000) {
        for (std::size_t n = 5; n <= 6; ++n) {
            for (std::size_t big_n = n; big_n <= 10; ++big_n, ++count, ++seed) {
                const auto z = random_thin(big_n, n, seed);
                const double exact = permanent_exact(z).value;
                const auto d = diagnostics(z);
                const auto b1 = approx_first(d);
                const auto b2 = approx_second(d);
                if (!contains(b1, exact)) f.add("first order misses, seed " + std::to_string(seed));
                if (!contains(b2, exact)) f.add("second order misses, seed " + std::to_string(seed));
                if (b2.has_bound() && b1.has_bound() && *b2.half_width <= *b1.half_width)
                    ++second_tighter;
            }
        }
    }
    if (!f.empty()) return {false, f.summary()};
    return {true, std::to_string(count) + " matrices, both intervals contain the permanent; second "
                      "order narrower in " + std::to_string(second_tighter)};
}

Outcome low_order_exactness() {
    Failures f;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < 150; ++seed, ++count) {
        const auto z1 = random_thin(1 + seed % 9, 1, 300000 + seed);
        if (approx_first(z1).estimate != permanent_bruteforce(z1).value)
            f.add("n=1 seed " + std::to_string(seed));
        const auto z2 = random_thin(2 + seed % 8, 2, 310000 + seed);
        const double e = rel_err(approx_second(z2).estimate, permanent_bruteforce(z2).value);
        if (e > 1e-12) f.add("n=2 seed " + std::to_string(seed) + " rel err " + fmt(e));
    }
    const ThinMatrix small(Matrix::from_rows({{1, 2}, {3, 4}}));
    if (rel_err(approx_second(small).estimate, 10.0) > 1e-12) f.add("[[1,2],[3,4]] != 10");
    if (!f.empty()) return {false, f.summary()};
    return {true, std::to_string(count) + " instances per order, [[1,2],[3,4]] -> 10"};
}

Outcome degenerate_exactness() {
    Failures f;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Sampler s(400000 + seed);
        const std::size_t n = 5 + seed % 3;
        const std::size_t big_n = n + seed % 4;
        const Matrix row = random_matrix(1, n, s);
        Matrix m(big_n, n);
        for (std::size_t j = 0; j < big_n; ++j)
            for (std::size_t r = 0; r < n; ++r) m(j, r) = row(0, r);
        const ThinMatrix z(m);
        const auto d = diagnostics(z);
        for (int k = 2; k <= 4; ++k)
            if (d.theta.at(k) != 0.0) f.add("theta" + std::to_string(k) + " != 0");
        if (d.p2 != 0.0) f.add("p2 = " + fmt(d.p2));
        const auto b1 = approx_first(d);
        const auto b2 = approx_second(d);
        if (*b1.half_width != 0.0 || *b2.half_width != 0.0) f.add("nonzero half-width");
        const double e = rel_err(b1.estimate, permanent_bruteforce(z).value);
        if (e > 1e-12) f.add("estimate differs from permanent by " + fmt(e));
    }
    const auto ones = approx_first(ThinMatrix(Matrix(6, 5, 1.0)));
    if (ones.estimate != 720.0) f.add("all-ones estimate " + fmt(ones.estimate));
    if (approx_second(ThinMatrix(Matrix(6, 5, 1.0))).estimate != 720.0) f.add("all-ones second");
    if (!f.empty()) return {false, f.summary()};
    return {true, "50 identical-row matrices, all-ones 6x5 -> 720"};
}

Outcome path_equivalence() {
    Failures f;
    double worst = 0.0;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < 210; ++seed, ++count) {
        const std::size_t n = 4 + seed % 3;
        const std::size_t big_n = n + seed % (11 - n);
        const auto z = random_thin(big_n, n, 500000 + seed);
        for (int d = 2; d <= 4; ++d) {
            const double e = rel_err(*theta_fast(z, d), *theta_naive(z, d));
            worst = std::max(worst, e);
            if (e > 1e-9) f.add("theta" + std::to_string(d) + " seed " + std::to_string(seed));
        }
        const std::size_t nk = 5 + seed % 2;
        const auto zk = random_thin(nk + seed % (11 - nk), nk, 510000 + seed);
        for (int v = 2; v <= 4; ++v) {
            if (*kappa(zk, v) != oracle::kappa(zk.matrix(), static_cast<std::size_t>(v)))
                f.add("kappa" + std::to_string(v) + " seed " + std::to_string(seed));
        }
    }
    if (!f.empty()) return {false, f.summary()};
    return {true, std::to_string(count) + " matrices up to 10x6, max theta rel err " + fmt(worst) +
                      ", kappa bit-identical"};
}

Outcome toy_reproduction() {
    Failures f;
    const auto toy = gen_random(4, 4, 7);
    const WideMatrix wide = toy.wide();

    // (a) and (b)
    const auto all = enumerate_all(wide);
    if (all.assignments.size() != 11880) f.add("enumeration size " + std::to_string(all.assignments.size()));
    std::vector<Assignment> positive;
    for (const auto& a : all.assignments)
        if (a.weight > 0.0) positive.push_back(a);
    const auto top = murty_kbest(wide, 50);
    bool same = top.assignments.size() == 50;
    for (std::size_t i = 0; same && i < 50; ++i)
        same = top.assignments[i].row_to_col == positive[i].row_to_col;
    if (!same) f.add("(a) Murty top-50 differs from exhaustive top-50");
    const double per = permanent_exact(to_thin(toy)).value;
    const double sum_err = rel_err(all.cumulative_weights.back(), per);
    if (sum_err > 1e-10) f.add("(b) weight sum rel err " + fmt(sum_err));

    // (c) on the toy and on a bounded 5-target instance
    auto check_bracket = [&](const LikelihoodMatrix& l, std::size_t k_max, const std::string& tag) {
        for (auto order : {ApproxOrder::first, ApproxOrder::second}) {
            TruncationOptions opts;
            opts.order = order;
            const auto rep = truncation_report(l.wide(), k_max, opts);
            if (!rep.mass_fraction_exact) {
                f.add("(c) " + tag + " no exact fraction");
                continue;
            }
            const auto& ex = *rep.mass_fraction_exact;
            for (std::size_t k = 0; k < ex.size(); ++k) {
                if (rep.mass_fraction_lower[k] > ex[k] * (1 + 1e-9) ||
                    ex[k] > rep.mass_fraction_upper[k] * (1 + 1e-9)) {
                    f.add("(c) " + tag + " bracket violated at K=" + std::to_string(k + 1));
                    break;
                }
            }
        }
    };
    check_bracket(toy, positive.size(), "toy");
    check_bracket(gen_random(5, 5, 7), 500, "5x15");

    // (d)
    const auto curve = murty_kbest(wide, positive.size());
    const auto& cw = curve.cumulative_weights;
    for (std::size_t k = 1; k < cw.size(); ++k) {
        if (cw[k] < cw[k - 1]) {
            f.add("(d) cumulative decreases at K=" + std::to_string(k + 1));
            break;
        }
        if (k >= 2 && cw[k] - cw[k - 1] > cw[k - 1] - cw[k - 2]) {
            f.add("(d) increment grows at K=" + std::to_string(k + 1));
            break;
        }
    }
    if (!f.empty()) return {false, f.summary()};
    return {true, "4x12 toy: top-50 exact, sum rel err " + fmt(sum_err) + ", " +
                      std::to_string(positive.size()) + "-step curve concave, brackets hold"};
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Outcome ordinal_timing() {
    BenchConfig cfg;
    cfg.targets = {8, 8};
    cfg.measurements = {12, 16};
    cfg.trials = 3;
    cfg.seed = 1;
    const auto res = run_bench(cfg);
    Failures f;
    std::vector<double> t1, t2;
    std::size_t ryser_runs = 0;
    for (const auto& r : res.records) {
        if (r.method == BenchMethod::roos1) t1.push_back(r.wall_time);
        if (r.method == BenchMethod::roos2) {
            t2.push_back(r.wall_time);
            if (!r.lower) f.add("roos2 without interval");
        }
        if (r.method == BenchMethod::ryser) ++ryser_runs;
    }
    for (const auto& v : res.violations) f.add(v);
    if (ryser_runs != 15 || t1.size() != 15 || t2.size() != 15) f.add("missing bench records");
    if (t1.empty() || t2.empty()) return {false, f.summary()};
    const double m1 = median(t1);
    const double m2 = median(t2);
    if (!(m1 < m2)) f.add("median roos1 " + fmt(m1) + " s >= median roos2 " + fmt(m2) + " s");
    if (!f.empty()) return {false, f.summary()};
    return {true, "median roos1 " + fmt(m1) + " s < median roos2 " + fmt(m2) + " s; " +
                      std::to_string(ryser_runs) + " ryser values inside every interval"};
}

Outcome invariance() {
    Failures f;
    double worst = 0.0;
    auto close = [&](double a, double b, const std::string& what) {
        const double e = rel_err(a, b);
        worst = std::max(worst, e);
        if (e > 1e-12) f.add(what + " rel err " + fmt(e));
    };
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < 120; ++seed, ++count) {
        const std::size_t n = 5 + seed % 2;
        const std::size_t big_n = n + seed % 4;
        const auto z = random_thin(big_n, n, 600000 + seed);
        const double per = permanent_exact(z).value;
        const auto b1 = approx_first(z);
        const auto b2 = approx_second(z);

        // Column homogeneity
        const std::size_t col = seed % n;
        const double c = 0.3 + 0.4 * static_cast<double>(seed % 7);
        Matrix scaled = z.matrix();
        for (std::size_t j = 0; j < big_n; ++j) scaled(j, col) *= c;
        const ThinMatrix zs(scaled);
        close(permanent_exact(zs).value, c * per, "scaled permanent");
        close(approx_first(zs).estimate, c * b1.estimate, "scaled first estimate");
        close(approx_second(zs).estimate, c * b2.estimate, "scaled second estimate");

        // Row and column permutation
        std::vector<std::size_t> rp(big_n), cp(n);
        std::iota(rp.begin(), rp.end(), std::size_t{0});
        std::iota(cp.begin(), cp.end(), std::size_t{0});
        Sampler s(610000 + seed);
        for (std::size_t i = big_n - 1; i > 0; --i)
            std::swap(rp[i], rp[static_cast<std::size_t>(s.uniform01() * static_cast<double>(i + 1))]);
        for (std::size_t i = n - 1; i > 0; --i)
            std::swap(cp[i], cp[static_cast<std::size_t>(s.uniform01() * static_cast<double>(i + 1))]);
        Matrix p(big_n, n);
        for (std::size_t j = 0; j < big_n; ++j)
            for (std::size_t r = 0; r < n; ++r) p(j, r) = z(rp[j], cp[r]);
        const ThinMatrix zp(p);
        const auto p1 = approx_first(zp);
        const auto p2 = approx_second(zp);
        close(permanent_exact(zp).value, per, "permuted permanent");
        close(p1.estimate, b1.estimate, "permuted first estimate");
        close(p2.estimate, b2.estimate, "permuted second estimate");
        close(*p1.half_width, *b1.half_width, "permuted first half-width");
        close(*p2.half_width, *b2.half_width, "permuted second half-width");
    }
    if (!f.empty()) return {false, f.summary()};
    return {true, std::to_string(count) + " instances, max rel err " + fmt(worst)};
}

struct Run {
    int status = -1;
    std::string out;
};

Run run_cli(const std::string& args) {
    const std::string cmd = std::string(PERMBOUND_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
    const int raw = pclose(p);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

// Blanks the wall_time_s column of a bench CSV.
std::string drop_wall_time(const std::string& csv) {
    std::istringstream in(csv);
    std::string out;
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        if (cells.size() == 6) cells[4].clear();
        for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
        out += '\n';
    }
    return out;
}

Outcome cli_determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "permbound_acceptance";
    std::filesystem::create_directories(dir);
    const std::string a = (dir / "a.json").string();
    const std::string b = (dir / "b.json").string();
    Failures f;

    const std::string gen = "gen --targets 5 --measurements 4 --seed 11 --output ";
    if (run_cli(gen + a).status != 0 || run_cli(gen + b).status != 0) return {false, "gen failed"};
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    if (slurp(a) != slurp(b)) f.add("gen output differs");

    const std::vector<std::string> commands = {
        "gen --targets 3 --measurements 6 --seed 4 --distribution exponential:2",
        "permanent " + a,
        "permanent --method bruteforce " + a,
        "approx " + a + " --order 1 --diagnostics",
        "approx " + a + " --order 2 --diagnostics",
        "kbest " + a + " --k 40",
        "truncation " + a + " --k-max 60 --exact",
        "truncation " + a + " --k-max 60 --order 1 --csv",
    };
    for (const auto& cmd : commands) {
        const Run x = run_cli(cmd);
        const Run y = run_cli(cmd);
        if (x.status != 0 || x.out.empty()) f.add("'" + cmd + "' failed");
        else if (x.out != y.out) f.add("'" + cmd + "' output differs");
    }
    const std::string bench = "bench --targets 5..6 --measurements 6..7 --trials 2 --seed 3";
    const Run x = run_cli(bench);
    const Run y = run_cli(bench);
    const Run z = run_cli(bench + " --threads 2");
    if (x.status != 0) f.add("bench failed");
    else if (drop_wall_time(x.out) != drop_wall_time(y.out)) f.add("bench output differs");
    else if (drop_wall_time(x.out) != drop_wall_time(z.out)) f.add("bench differs across --threads");

    std::filesystem::remove_all(dir);
    if (!f.empty()) return {false, f.summary()};
    return {true, std::to_string(commands.size() + 2) + " commands byte-identical on repeat"};
}

}  // namespace

int main() {
    struct Criterion {
        std::string name;
        std::function<Outcome()> check;
        double limit_s;  // 0: no runtime limit
    };
    const std::vector<Criterion> criteria = {
        {"1 subset method equals brute force", oracle_equivalence, 30},
        {"2 both intervals contain the permanent", bound_containment, 600},
        {"3 low-order exactness", low_order_exactness, 0},
        {"4 degenerate exactness", degenerate_exactness, 0},
        {"5 theta and kappa path equivalence", path_equivalence, 0},
        {"6 truncation toy reproduction", toy_reproduction, 60},
        {"7 ordinal timing and bench containment", ordinal_timing, 0},
        {"8 homogeneity and permutation invariance", invariance, 0},
        {"9 CLI determinism", cli_determinism, 0},
    };

    int failed = 0;
    for (const auto& [name, check, limit_s] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.pass && limit_s > 0 && secs >= limit_s) {
            o = {false, o.detail + "; exceeded the " + fmt(limit_s) + " s limit"};
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << " | " << o.detail
                  << " | " << fmt(secs) << " s" << std::endl;
        failed += o.pass ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
              << std::endl;
    return failed == 0 ? 0 : 1;
}
