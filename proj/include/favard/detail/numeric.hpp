#pragma once

#include <cmath>
#include <span>

namespace favard::detail {

// Neumaier's variant of Kahan summation. Order-dependent by construction, so
// callers feed it in a fixed (index) order.
class CompensatedSum {
  public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept
{
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

} // namespace favard::detail
