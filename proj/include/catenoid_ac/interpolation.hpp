#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "catenoid_ac/errors.hpp"

namespace catenoid_ac {

/// Piecewise cubic Hermite interpolant through samples whose slopes are known (typically
/// the right-hand side of the ODE the samples came from). The abscissae may be strictly
/// increasing or strictly decreasing.
///
/// With `monotone` set, slopes are limited per interval (Fritsch-Carlson) so that monotone
/// data yield a monotone interpolant.
class HermiteInterpolant {
public:
    HermiteInterpolant() = default;

    HermiteInterpolant(std::vector<double> x, std::vector<double> y, std::vector<double> dy,
                       bool monotone)
        : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)), monotone_(monotone) {
        if (x_.size() < 2 || y_.size() != x_.size() || dy_.size() != x_.size()) {
            throw ArgumentError("HermiteInterpolant: need >= 2 samples of matching size");
        }
        decreasing_ = x_.back() < x_.front();
    }

    bool empty() const noexcept { return x_.empty(); }
    double front() const { return x_.front(); }
    double back() const { return x_.back(); }

    bool contains(double t) const noexcept {
        if (x_.empty()) return false;
        const double lo = std::min(x_.front(), x_.back());
        const double hi = std::max(x_.front(), x_.back());
        return t >= lo && t <= hi;
    }

    double value(double t) const { return eval(t, false); }
    double derivative(double t) const { return eval(t, true); }

private:
    std::size_t interval(double t) const {
        // index i with t in [x_i, x_{i+1}] (in the storage direction)
        std::size_t i;
        if (decreasing_) {
            auto it = std::upper_bound(x_.begin(), x_.end(), t, std::greater<>());
            i = static_cast<std::size_t>(it - x_.begin());
        } else {
            auto it = std::upper_bound(x_.begin(), x_.end(), t);
            i = static_cast<std::size_t>(it - x_.begin());
        }
        if (i == 0) i = 1;
        if (i >= x_.size()) i = x_.size() - 1;
        return i - 1;
    }

    double eval(double t, bool derivative) const {
        if (!contains(t)) throw ArgumentError("HermiteInterpolant: abscissa outside sample range");
        const std::size_t i = interval(t);
        const double x0 = x_[i], x1 = x_[i + 1];
        const double h = x1 - x0;
        const double y0 = y_[i], y1 = y_[i + 1];
        double m0 = dy_[i] * h, m1 = dy_[i + 1] * h;  // slopes in the unit-interval variable
        if (monotone_) limit(y1 - y0, m0, m1);
        const double s = (t - x0) / h;
        if (!derivative) {
            const double s2 = s * s, s3 = s2 * s;
            return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
                   (s3 - s2) * m1;
        }
        const double s2 = s * s;
        return ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * y1 +
                (3 * s2 - 2 * s) * m1) /
               h;
    }

    static void limit(double delta, double& m0, double& m1) {
        if (delta == 0.0) {
            m0 = m1 = 0.0;
            return;
        }
        if (m0 * delta < 0) m0 = 0.0;
        if (m1 * delta < 0) m1 = 0.0;
        const double a = m0 / delta, b = m1 / delta;
        const double s = a * a + b * b;
        if (s > 9.0) {
            const double tau = 3.0 / std::sqrt(s);
            m0 = tau * a * delta;
            m1 = tau * b * delta;
        }
    }

    std::vector<double> x_, y_, dy_;
    bool monotone_ = false;
    bool decreasing_ = false;
};

}  // namespace catenoid_ac
