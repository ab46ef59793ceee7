#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace nlpoisson {

/// Points live in R^n with n <= 3; unused trailing components stay zero.
using Point = std::array<double, 3>;

inline Point operator-(const Point& a, const Point& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Point operator+(const Point& a, const Point& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline double dot(const Point& a, const Point& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double squared_distance(const Point& a, const Point& b) {
    const Point d = a - b;
    return dot(d, d);
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double value) {
        const double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value)) {
            correction_ += (sum_ - t) + value;
        } else {
            correction_ += (value - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + correction_; }

private:
    double sum_ = 0.0;
    double correction_ = 0.0;
};

}  // namespace nlpoisson
