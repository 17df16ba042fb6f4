#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace permbound {

/// Raised when a matrix violates its shape or value invariants.
class MatrixError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix of doubles. No invariants beyond its shape.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    /// Builds from nested rows; all rows must have equal length.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
        return data_[i * cols_ + j];
    }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    [[nodiscard]] Matrix transpose() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Throws MatrixError naming the first negative or non-finite entry.
void require_nonnegative_finite(const Matrix& m, const std::string& what);

/// N x n nonnegative matrix with N >= n >= 1 (rows are the "items", columns the "slots").
class ThinMatrix {
public:
    explicit ThinMatrix(Matrix m);

    [[nodiscard]] std::size_t num_rows() const noexcept { return m_.rows(); }
    [[nodiscard]] std::size_t num_cols() const noexcept { return m_.cols(); }
    [[nodiscard]] double operator()(std::size_t j, std::size_t r) const noexcept { return m_(j, r); }
    [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }

private:
    Matrix m_;
};

/// Wide nonnegative matrix with rows <= cols: one row per target, every
/// association hypothesis picks one entry per row and at most one per column.
class WideMatrix {
public:
    explicit WideMatrix(Matrix m);

    [[nodiscard]] std::size_t num_rows() const noexcept { return m_.rows(); }
    [[nodiscard]] std::size_t num_cols() const noexcept { return m_.cols(); }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
    [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }

private:
    Matrix m_;
};

/// Target-by-column likelihood matrix laid out as
/// [ detections (T x M) | missed-detection diag (T x T) | death diag (T x T) ].
class LikelihoodMatrix {
public:
    /// Validates layout: shape T x (M + 2T), nonnegative finite entries,
    /// and exact zeros off the two diagonals.
    LikelihoodMatrix(std::size_t targets, std::size_t measurements, Matrix m);

    [[nodiscard]] std::size_t num_targets() const noexcept { return targets_; }
    [[nodiscard]] std::size_t num_measurements() const noexcept { return measurements_; }
    [[nodiscard]] std::size_t num_cols() const noexcept { return m_.cols(); }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
    [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }

    /// Column indices {0, M, M+T, M+2T}.
    [[nodiscard]] std::vector<std::size_t> block_boundaries() const;

    [[nodiscard]] WideMatrix wide() const { return WideMatrix(m_); }

private:
    std::size_t targets_;
    std::size_t measurements_;
    Matrix m_;
};

[[nodiscard]] LikelihoodMatrix build_likelihood(std::size_t targets, std::size_t measurements,
                                                const Matrix& detection,
                                                std::span<const double> missed,
                                                std::span<const double> death);

[[nodiscard]] ThinMatrix to_thin(const WideMatrix& wide);
[[nodiscard]] ThinMatrix to_thin(const LikelihoodMatrix& l);

/// Negative-log costs; +infinity marks a zero likelihood (forbidden pick).
class CostMatrix {
public:
    explicit CostMatrix(Matrix costs) : c_(std::move(costs)) {}

    [[nodiscard]] std::size_t rows() const noexcept { return c_.rows(); }
    [[nodiscard]] std::size_t cols() const noexcept { return c_.cols(); }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return c_(i, j); }
    [[nodiscard]] const Matrix& matrix() const noexcept { return c_; }

private:
    Matrix c_;
};

[[nodiscard]] CostMatrix neg_log_cost(const Matrix& likelihood);
[[nodiscard]] CostMatrix neg_log_cost(const LikelihoodMatrix& l);

// ---------------------------------------------------------------------------
// Random generation

/// Identifier written next to every seeded output so runs can be replayed.
inline constexpr const char* kRngAlgorithm = "mt19937_64/u53";

struct Distribution {
    enum class Kind { uniform, exponential };
    Kind kind = Kind::uniform;
    double a = 0.0;  ///< uniform: low; exponential: rate
    double b = 1.0;  ///< uniform: high (exclusive)
};

[[nodiscard]] Distribution parse_distribution(const std::string& text);
[[nodiscard]] std::string to_string(const Distribution& d);

/// Portable sampler: 53-bit uniforms drawn from mt19937_64, independent of
/// the standard library's distribution implementations.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed);
    double uniform01();
    double draw(const Distribution& d);

private:
    std::mt19937_64 engine_;
};

/// GLMB-structured random likelihood matrix (detections and both diagonals
/// drawn i.i.d.; off-diagonal block entries exactly zero).
[[nodiscard]] LikelihoodMatrix gen_random(std::size_t targets, std::size_t measurements,
                                          std::uint64_t seed, const Distribution& dist = {});

/// Fully dense random T x (M + 2T) matrix, ignoring the block layout.
[[nodiscard]] WideMatrix gen_random_dense(std::size_t targets, std::size_t measurements,
                                          std::uint64_t seed, const Distribution& dist = {});

/// Dense random rows x cols matrix (any shape), mostly for tests.
[[nodiscard]] Matrix random_matrix(std::size_t rows, std::size_t cols, Sampler& sampler,
                                   const Distribution& dist = {});

}  // namespace permbound
