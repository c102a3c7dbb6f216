#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace modnull {

/// Unsigned 128-bit accumulator for degree power sums (S4 overflows 64 bits
/// once n exceeds a few thousand on dense graphs).
using WideCount = unsigned __int128;

std::string to_string(WideCount value);

inline double to_double(WideCount value) { return static_cast<double>(value); }

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace modnull
