#include "permbound/bench.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "permbound/exact_permanent.hpp"
#include "permbound/matrix_io.hpp"
#include "permbound/roos.hpp"

namespace permbound {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::size_t parse_count(const std::string& s) {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad count '" + s + "'");
    return static_cast<std::size_t>(v);
}

template <typename F>
double time_once(F&& f, double& value) {
    value = f();  // warm-up
    const auto t0 = std::chrono::steady_clock::now();
    value = f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

std::string to_string(BenchMethod m) {
    switch (m) {
    case BenchMethod::ryser: return "ryser";
    case BenchMethod::bruteforce: return "bruteforce";
    case BenchMethod::roos1: return "roos1";
    case BenchMethod::roos2: return "roos2";
    }
    return "?";
}

BenchMethod parse_bench_method(const std::string& text) {
    if (text == "ryser") return BenchMethod::ryser;
    if (text == "bruteforce") return BenchMethod::bruteforce;
    if (text == "roos1") return BenchMethod::roos1;
    if (text == "roos2") return BenchMethod::roos2;
    throw std::invalid_argument("unknown bench method '" + text + "'");
}

CountRange parse_range(const std::string& text) {
    const auto dots = text.find("..");
    CountRange r;
    if (dots == std::string::npos) {
        r.lo = r.hi = parse_count(text);
    } else {
        r.lo = parse_count(text.substr(0, dots));
        r.hi = parse_count(text.substr(dots + 2));
    }
    if (r.lo > r.hi) throw std::invalid_argument("empty range '" + text + "'");
    return r;
}

std::uint64_t bench_matrix_seed(std::uint64_t seed, std::size_t targets, std::size_t measurements,
                                std::size_t trial) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ targets);
    h = splitmix64(h ^ measurements);
    return splitmix64(h ^ trial);
}

BenchResult run_bench(const BenchConfig& cfg) {
    if (cfg.targets.lo < 1) throw std::invalid_argument("bench needs at least one target");
    BenchResult result;
    PermanentOptions popts;
    popts.threads = cfg.threads;
    RoosOptions ropts;
    ropts.threads = cfg.threads;

    for (std::size_t t = cfg.targets.lo; t <= cfg.targets.hi; ++t) {
        for (std::size_t m = cfg.measurements.lo; m <= cfg.measurements.hi; ++m) {
            for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
                const LikelihoodMatrix l =
                    gen_random(t, m, bench_matrix_seed(cfg.seed, t, m, trial), cfg.distribution);
                const ThinMatrix thin = to_thin(l);
                std::optional<double> exact;
                std::vector<BenchRecord> roos_records;

                for (BenchMethod method : cfg.methods) {
                    BenchRecord rec;
                    rec.method = method;
                    rec.rows = l.num_targets();
                    rec.cols = l.num_cols();
                    rec.trial = trial;
                    try {
                        switch (method) {
                        case BenchMethod::ryser:
                            rec.wall_time = time_once(
                                [&] { return permanent_ryser(thin, popts).value; }, rec.value);
                            exact = rec.value;
                            break;
                        case BenchMethod::bruteforce:
                            rec.wall_time = time_once(
                                [&] { return permanent_bruteforce(thin, popts).value; }, rec.value);
                            exact = rec.value;
                            break;
                        case BenchMethod::roos1:
                        case BenchMethod::roos2: {
                            const ApproxOrder order = method == BenchMethod::roos1
                                                          ? ApproxOrder::first
                                                          : ApproxOrder::second;
                            BoundedEstimate est;
                            rec.wall_time = time_once(
                                [&] {
                                    est = approx(thin, order, ropts);
                                    return est.estimate;
                                },
                                rec.value);
                            if (est.has_bound()) {
                                rec.lower = est.lower;
                                rec.upper = est.upper;
                            }
                            roos_records.push_back(rec);
                            break;
                        }
                        }
                    } catch (const InfeasibleError&) {
                        std::ostringstream os;
                        os << to_string(method) << " T=" << t << " M=" << m;
                        if (trial == 0) result.skipped.push_back(os.str());
                        continue;
                    }
                    result.records.push_back(rec);
                }

                if (exact) {
                    for (const auto& r : roos_records) {
                        if (!r.lower) continue;
                        const double slack = 1e-9 * std::max(1.0, std::fabs(*exact));
                        if (*exact < *r.lower - slack || *exact > *r.upper + slack) {
                            std::ostringstream os;
                            os.precision(17);
                            os << to_string(r.method) << " T=" << t << " M=" << m
                               << " trial=" << trial << ": exact " << *exact << " outside ["
                               << *r.lower << ", " << *r.upper << "]";
                            result.violations.push_back(os.str());
                        }
                    }
                }
            }
        }
    }
    return result;
}

std::string bench_csv(const std::vector<BenchRecord>& records, bool include_wall_time) {
    std::string out = "method,rows,cols,trial,wall_time_s,value\n";
    for (const auto& r : records) {
        out += to_string(r.method) + ',' + std::to_string(r.rows) + ',' + std::to_string(r.cols) +
               ',' + std::to_string(r.trial) + ',' +
               (include_wall_time ? format_double(r.wall_time) : std::string()) + ',' +
               format_double(r.value) + '\n';
    }
    return out;
}

}  // namespace permbound
