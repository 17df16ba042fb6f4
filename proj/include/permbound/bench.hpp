#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "permbound/matrix.hpp"

namespace permbound {

enum class BenchMethod { ryser, bruteforce, roos1, roos2 };

[[nodiscard]] std::string to_string(BenchMethod m);
[[nodiscard]] BenchMethod parse_bench_method(const std::string& text);

/// Inclusive integer range written "a..b" or "a".
struct CountRange {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

[[nodiscard]] CountRange parse_range(const std::string& text);

struct BenchConfig {
    CountRange targets{5, 8};
    CountRange measurements{8, 16};
    std::size_t trials = 3;
    std::uint64_t seed = 1;
    std::vector<BenchMethod> methods{BenchMethod::ryser, BenchMethod::roos1, BenchMethod::roos2};
    Distribution distribution{};
    unsigned threads = 1;
};

struct BenchRecord {
    BenchMethod method = BenchMethod::ryser;
    std::size_t rows = 0;   ///< likelihood rows (targets)
    std::size_t cols = 0;   ///< likelihood columns (M + 2T)
    std::size_t trial = 0;
    double wall_time = 0.0; ///< seconds
    double value = 0.0;     ///< permanent or Roos estimate
    std::optional<double> lower;
    std::optional<double> upper;
};

struct BenchResult {
    std::vector<BenchRecord> records;
    /// Cases where a Roos interval missed the exact value on the same matrix.
    std::vector<std::string> violations;
    /// (method, size) pairs skipped because an exact method's cap was exceeded.
    std::vector<std::string> skipped;
};

/// Seed for one benchmark matrix, derived from the run seed and its position.
[[nodiscard]] std::uint64_t bench_matrix_seed(std::uint64_t seed, std::size_t targets,
                                              std::size_t measurements, std::size_t trial);

/// Times every method on every (T, M, trial) GLMB matrix. Each evaluation
/// gets one untimed warm-up run, then one timed run on a monotonic clock.
[[nodiscard]] BenchResult run_bench(const BenchConfig& cfg);

/// CSV with header method,rows,cols,trial,wall_time_s,value.
[[nodiscard]] std::string bench_csv(const std::vector<BenchRecord>& records,
                                    bool include_wall_time = true);

}  // namespace permbound
