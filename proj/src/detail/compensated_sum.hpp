#pragma once

#include <cmath>

namespace permbound::detail {

/// Neumaier's variant of Kahan summation; handles terms larger than the
/// running sum, which the alternating subset sums produce constantly.
class CompensatedSum {
public:
    explicit CompensatedSum(bool enabled = true) : enabled_(enabled) {}

    void add(double x) noexcept {
        if (!enabled_) {
            sum_ += x;
            return;
        }
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    bool enabled_;
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace permbound::detail
