#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "catenoid_ac/errors.hpp"
#include "catenoid_ac/geometry.hpp"

namespace catenoid_ac {

/// Uniform grid y_i = i*h on [0, y_max], h = y_max/(n-1).
class Grid1D {
public:
    Grid1D(double y_max, std::size_t n) : y_max_(y_max), n_(n) {
        if (!(y_max > 0.0)) throw ArgumentError("Grid1D: y_max must be positive");
        if (n < 8) throw ArgumentError("Grid1D: need at least 8 nodes, got " + std::to_string(n));
        h_ = y_max / static_cast<double>(n - 1);
    }

    double y_max() const noexcept { return y_max_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }
    double y(std::size_t i) const noexcept {
        return i + 1 == n_ ? y_max_ : static_cast<double>(i) * h_;
    }

    std::vector<double> nodes() const {
        std::vector<double> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = y(i);
        return out;
    }

    /// r(y_i) at every node.
    std::vector<double> radii(const CatenoidParams& p) const {
        std::vector<double> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = r_of_y(y(i), p);
        return out;
    }

private:
    double y_max_;
    std::size_t n_;
    double h_;
};

}  // namespace catenoid_ac
