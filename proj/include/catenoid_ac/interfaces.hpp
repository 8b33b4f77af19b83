#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "catenoid_ac/errors.hpp"
#include "catenoid_ac/geometry.hpp"
#include "catenoid_ac/grid.hpp"
#include "catenoid_ac/pde_solver.hpp"

namespace catenoid_ac {

/// Zero crossings of v, located by linear interpolation in r between neighbouring nodes.
/// Throws TopologyError unless exactly `expected_k` crossings are found.
inline std::vector<double> extract_interfaces(const Field& field, const Grid1D& grid,
                                              const CatenoidParams& p, int expected_k) {
    const auto& v = field.values;
    if (v.size() != grid.size()) throw ArgumentError("extract_interfaces: field/grid size mismatch");
    std::vector<double> out;
    double r_prev = r_of_y(grid.y(0), p);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double r_next = r_of_y(grid.y(i + 1), p);
        if ((v[i] < 0.0) != (v[i + 1] < 0.0)) {
            const double s = v[i] / (v[i] - v[i + 1]);
            out.push_back(r_prev + s * (r_next - r_prev));
        }
        r_prev = r_next;
    }
    if (static_cast<int>(out.size()) != expected_k) {
        throw TopologyError("extract_interfaces: expected " + std::to_string(expected_k) +
                                " zero crossings at t = " + std::to_string(field.t) + ", found " +
                                std::to_string(out.size()),
                            static_cast<int>(out.size()));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Extracted positions against the Toda prediction, stored layer-major.
struct InterfaceTrack {
    std::vector<double> times;
    std::vector<std::vector<double>> positions;       // [layer][sample]
    std::vector<std::vector<double>> toda_prediction;  // [layer][sample]
    std::vector<std::vector<double>> deviation;        // |positions - toda_prediction|

    explicit InterfaceTrack(int k = 0)
        : positions(static_cast<std::size_t>(k)),
          toda_prediction(static_cast<std::size_t>(k)),
          deviation(static_cast<std::size_t>(k)) {}

    int k() const noexcept { return static_cast<int>(positions.size()); }
    std::size_t samples() const noexcept { return times.size(); }

    void push(double t, const std::vector<double>& pos, const std::vector<double>& toda) {
        if (pos.size() != positions.size() || toda.size() != positions.size()) {
            throw ArgumentError("InterfaceTrack: sample has the wrong number of layers");
        }
        times.push_back(t);
        for (std::size_t j = 0; j < pos.size(); ++j) {
            positions[j].push_back(pos[j]);
            toda_prediction[j].push_back(toda[j]);
            deviation[j].push_back(std::abs(pos[j] - toda[j]));
        }
    }

    double max_deviation() const {
        double m = 0.0;
        for (const auto& d : deviation) {
            for (double x : d) m = std::max(m, x);
        }
        return m;
    }
};

}  // namespace catenoid_ac
