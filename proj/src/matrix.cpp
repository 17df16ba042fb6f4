#include "permbound/matrix.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace permbound {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) {
        throw MatrixError("matrix data has " + std::to_string(data_.size()) +
                          " entries, expected " + std::to_string(rows * cols));
    }
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    std::vector<double> data;
    data.reserve(r * c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) {
            throw MatrixError("row " + std::to_string(i) + " has " +
                              std::to_string(rows[i].size()) + " entries, expected " +
                              std::to_string(c));
        }
        data.insert(data.end(), rows[i].begin(), rows[i].end());
    }
    return Matrix(r, c, std::move(data));
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

void require_nonnegative_finite(const Matrix& m, const std::string& what) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            if (!std::isfinite(v) || v < 0.0) {
                std::ostringstream os;
                os << what << ": entry (" << i << ", " << j << ") = " << v
                   << " is not a finite nonnegative number";
                throw MatrixError(os.str());
            }
        }
    }
}

ThinMatrix::ThinMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.cols() < 1 || m_.rows() < m_.cols()) {
        throw MatrixError("thin matrix needs rows >= cols >= 1, got " +
                          std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
    }
    require_nonnegative_finite(m_, "thin matrix");
}

WideMatrix::WideMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() < 1 || m_.cols() < m_.rows()) {
        throw MatrixError("wide matrix needs cols >= rows >= 1, got " +
                          std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
    }
    require_nonnegative_finite(m_, "wide matrix");
}

LikelihoodMatrix::LikelihoodMatrix(std::size_t targets, std::size_t measurements, Matrix m)
    : targets_(targets), measurements_(measurements), m_(std::move(m)) {
    if (targets_ < 1) throw MatrixError("likelihood matrix needs at least one target");
    if (m_.rows() != targets_ || m_.cols() != measurements_ + 2 * targets_) {
        std::ostringstream os;
        os << "likelihood matrix with " << targets_ << " targets and " << measurements_
           << " measurements must be " << targets_ << "x" << measurements_ + 2 * targets_
           << ", got " << m_.rows() << "x" << m_.cols();
        throw MatrixError(os.str());
    }
    require_nonnegative_finite(m_, "likelihood matrix");
    for (std::size_t i = 0; i < targets_; ++i) {
        for (std::size_t k = 0; k < targets_; ++k) {
            if (i == k) continue;
            for (std::size_t col : {measurements_ + k, measurements_ + targets_ + k}) {
                if (m_(i, col) != 0.0) {
                    std::ostringstream os;
                    os << "likelihood matrix: entry (" << i << ", " << col
                       << ") lies off a diagonal block and must be 0, got " << m_(i, col);
                    throw MatrixError(os.str());
                }
            }
        }
    }
}

std::vector<std::size_t> LikelihoodMatrix::block_boundaries() const {
    return {0, measurements_, measurements_ + targets_, measurements_ + 2 * targets_};
}

LikelihoodMatrix build_likelihood(std::size_t targets, std::size_t measurements,
                                  const Matrix& detection, std::span<const double> missed,
                                  std::span<const double> death) {
    if (detection.rows() != targets || detection.cols() != measurements) {
        throw MatrixError("detection block must be " + std::to_string(targets) + "x" +
                          std::to_string(measurements));
    }
    if (missed.size() != targets || death.size() != targets) {
        throw MatrixError("missed and death vectors must have one entry per target");
    }
    Matrix m(targets, measurements + 2 * targets);
    for (std::size_t i = 0; i < targets; ++i) {
        for (std::size_t j = 0; j < measurements; ++j) m(i, j) = detection(i, j);
        m(i, measurements + i) = missed[i];
        m(i, measurements + targets + i) = death[i];
    }
    return LikelihoodMatrix(targets, measurements, std::move(m));
}

ThinMatrix to_thin(const WideMatrix& wide) { return ThinMatrix(wide.matrix().transpose()); }

ThinMatrix to_thin(const LikelihoodMatrix& l) { return ThinMatrix(l.matrix().transpose()); }

CostMatrix neg_log_cost(const Matrix& likelihood) {
    Matrix c(likelihood.rows(), likelihood.cols());
    for (std::size_t i = 0; i < c.rows(); ++i) {
        for (std::size_t j = 0; j < c.cols(); ++j) {
            const double z = likelihood(i, j);
            c(i, j) = z > 0.0 ? -std::log(z) : std::numeric_limits<double>::infinity();
        }
    }
    return CostMatrix(std::move(c));
}

CostMatrix neg_log_cost(const LikelihoodMatrix& l) { return neg_log_cost(l.matrix()); }

// ---------------------------------------------------------------------------

Distribution parse_distribution(const std::string& text) {
    // uniform | uniform:LO:HI | exponential | exponential:RATE
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.empty()) throw std::invalid_argument("empty distribution");

    auto number = [&](std::size_t idx) {
        std::size_t used = 0;
        const double v = std::stod(parts[idx], &used);
        if (used != parts[idx].size()) throw std::invalid_argument("bad number: " + parts[idx]);
        return v;
    };

    Distribution d;
    if (parts[0] == "uniform") {
        d.kind = Distribution::Kind::uniform;
        if (parts.size() == 3) {
            d.a = number(1);
            d.b = number(2);
        } else if (parts.size() != 1) {
            throw std::invalid_argument("expected uniform or uniform:LO:HI");
        }
        if (!(d.a >= 0.0 && d.b > d.a)) throw std::invalid_argument("uniform needs 0 <= LO < HI");
    } else if (parts[0] == "exponential") {
        d.kind = Distribution::Kind::exponential;
        d.a = 1.0;
        d.b = 0.0;
        if (parts.size() == 2) {
            d.a = number(1);
        } else if (parts.size() != 1) {
            throw std::invalid_argument("expected exponential or exponential:RATE");
        }
        if (!(d.a > 0.0)) throw std::invalid_argument("exponential rate must be positive");
    } else {
        throw std::invalid_argument("unknown distribution '" + parts[0] + "'");
    }
    return d;
}

std::string to_string(const Distribution& d) {
    std::ostringstream os;
    os.precision(17);
    if (d.kind == Distribution::Kind::uniform) {
        os << "uniform:" << d.a << ":" << d.b;
    } else {
        os << "exponential:" << d.a;
    }
    return os.str();
}

Sampler::Sampler(std::uint64_t seed) : engine_(seed) {}

double Sampler::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Sampler::draw(const Distribution& d) {
    const double u = uniform01();
    switch (d.kind) {
    case Distribution::Kind::uniform:
        return d.a + (d.b - d.a) * u;
    case Distribution::Kind::exponential:
        return -std::log1p(-u) / d.a;
    }
    return u;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, Sampler& sampler,
                     const Distribution& dist) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = sampler.draw(dist);
    return m;
}

LikelihoodMatrix gen_random(std::size_t targets, std::size_t measurements, std::uint64_t seed,
                            const Distribution& dist) {
    if (targets < 1) throw MatrixError("need at least one target");
    Sampler sampler(seed);
    // Draw order: detection block row-major, then missed diagonal, then death diagonal.
    Matrix detection = random_matrix(targets, measurements, sampler, dist);
    std::vector<double> missed(targets), death(targets);
    for (auto& v : missed) v = sampler.draw(dist);
    for (auto& v : death) v = sampler.draw(dist);
    return build_likelihood(targets, measurements, detection, missed, death);
}

WideMatrix gen_random_dense(std::size_t targets, std::size_t measurements, std::uint64_t seed,
                            const Distribution& dist) {
    if (targets < 1) throw MatrixError("need at least one target");
    Sampler sampler(seed);
    return WideMatrix(random_matrix(targets, measurements + 2 * targets, sampler, dist));
}

}  // namespace permbound
