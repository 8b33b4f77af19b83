#pragma once

// Heteroclinic layer w(x) = tanh(x/sqrt2), the cubic nonlinearity, the k-layer ansatz
// and the piecewise-exponential weight used to measure errors.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "catenoid_ac/errors.hpp"
#include "catenoid_ac/geometry.hpp"
#include "catenoid_ac/grid.hpp"

namespace catenoid_ac {

inline constexpr double kSqrt2 = std::numbers::sqrt2;

// ---------------------------------------------------------------------------
// Heteroclinic profile

namespace detail {
/// e^{-sqrt2 |x|}; every profile quantity below is a rational function of it.
inline double layer_decay(double x) { return std::exp(-kSqrt2 * std::abs(x)); }
}  // namespace detail

inline double w(double x) {
    if (std::abs(x) > 350.0) {
        const double tail = 2.0 * detail::layer_decay(x);
        return x > 0 ? 1.0 - tail : -1.0 + tail;
    }
    return std::tanh(x / kSqrt2);
}

/// 1 - w(x) = 2/(e^{sqrt2 x} + 1), free of cancellation for large positive x.
inline double one_minus_w(double x) {
    if (x >= 0) {
        const double q = detail::layer_decay(x);
        return 2.0 * q / (1.0 + q);
    }
    return 2.0 / (1.0 + std::exp(kSqrt2 * x));
}

/// 1 + w(x) = one_minus_w(-x).
inline double one_plus_w(double x) { return one_minus_w(-x); }

/// 1 - w^2 = sech^2(x/sqrt2) = 4q/(1+q)^2 with q = e^{-sqrt2|x|}.
inline double one_minus_w_squared(double x) {
    const double q = detail::layer_decay(x);
    const double d = 1.0 + q;
    return 4.0 * q / (d * d);
}

inline double w1(double x) { return one_minus_w_squared(x) / kSqrt2; }

inline double w2(double x) { return -w(x) * one_minus_w_squared(x); }

inline double w3(double x) {
    const double ww = w(x);
    return (3.0 * ww * ww - 1.0) * one_minus_w_squared(x) / kSqrt2;
}

// ---------------------------------------------------------------------------
// Nonlinearity f(v) = v(1 - v^2)

inline double f(double v) { return v * (1.0 - v * v); }
inline double fprime(double v) { return 1.0 - 3.0 * v * v; }

/// f(w(x)) = w (1-w)(1+w) evaluated from the accurate complements.
inline double f_of_w(double x) { return w(x) * one_minus_w(x) * one_plus_w(x); }

/// N(psi) = f(z+psi) - f(z) - f'(z) psi = -3 z psi^2 - psi^3.
inline double nonlinear_remainder(double psi, double z) {
    return -psi * psi * (3.0 * z + psi);
}

// ---------------------------------------------------------------------------
// Layer configuration and ansatz

/// k ordered interface radii rho_1 < ... < rho_k, all beyond the neck.
class LayerState {
public:
    explicit LayerState(std::vector<double> rho) : rho_(std::move(rho)) {
        if (rho_.empty()) throw ArgumentError("LayerState: need at least one layer");
        if (!(rho_.front() > 1.0)) throw StateError("LayerState: rho_1 must exceed 1");
        for (std::size_t j = 1; j < rho_.size(); ++j) {
            if (!(rho_[j] > rho_[j - 1])) {
                throw StateError("LayerState: interface radii must be strictly increasing");
            }
        }
    }

    int k() const noexcept { return static_cast<int>(rho_.size()); }
    const std::vector<double>& rho() const noexcept { return rho_; }
    double rho(int j) const { return rho_.at(static_cast<std::size_t>(j)); }

    /// -(1 + (-1)^k)/2: -1 for even k, 0 for odd k.
    double parity_constant() const noexcept { return k() % 2 == 0 ? -1.0 : 0.0; }

    /// lim_{r -> inf} z: +1 for odd k, -1 for even k.
    double far_field_value() const noexcept { return k() % 2 == 0 ? -1.0 : 1.0; }

    /// (-1)^{j+1} with 0-based j (so layer 0 carries +1).
    static double sign(int j) noexcept { return j % 2 == 0 ? 1.0 : -1.0; }

private:
    std::vector<double> rho_;
};

/// z(r) = sum_j (-1)^{j+1} w(r - rho_j) + parity constant.
inline double ansatz_z(double r, const LayerState& L) {
    double z = L.parity_constant();
    for (int j = 0; j < L.k(); ++j) z += LayerState::sign(j) * w(r - L.rho(j));
    return z;
}

// ---------------------------------------------------------------------------
// Weight Phi and weighted sup norm

using Rho0Evaluator = std::function<std::vector<double>(double)>;

struct WeightSpec {
    double sigma;
    Rho0Evaluator rho0;

    WeightSpec(double sigma_, Rho0Evaluator rho0_) : sigma(sigma_), rho0(std::move(rho0_)) {
        if (!(sigma > 0.0 && sigma < kSqrt2)) {
            throw ArgumentError("WeightSpec: sigma must lie in (0, sqrt 2)");
        }
    }

    /// sigma in (sqrt2/2, sqrt2), the range required by the reduced-dynamics estimates.
    bool admissible_for_reduction() const noexcept { return sigma > kSqrt2 / 2.0; }

    /// nu = (sqrt2 - sigma)/(2 sqrt2)
    double nu() const noexcept { return (kSqrt2 - sigma) / (2.0 * kSqrt2); }
};

namespace detail {

inline void require_ordered(std::span<const double> rho0, const char* who) {
    if (rho0.empty()) throw ArgumentError(std::string(who) + ": empty layer vector");
    for (std::size_t j = 1; j < rho0.size(); ++j) {
        if (!(rho0[j] > rho0[j - 1])) {
            throw StateError(std::string(who) + ": leading-order radii are not ordered");
        }
    }
}

/// 0-based branch index: smallest j with r <= (rho_j + rho_{j+1})/2, ties to the lower j.
inline std::size_t weight_branch(double r, std::span<const double> rho0) {
    for (std::size_t j = 0; j + 1 < rho0.size(); ++j) {
        if (r <= 0.5 * (rho0[j] + rho0[j + 1])) return j;
    }
    return rho0.size() - 1;
}

inline double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace detail

/// log Phi(r) for a given leading-order configuration.
///
/// With a single layer there are no neighbours to centre the exponentials on and the
/// weight is taken to be identically 1.
inline double log_weight_phi(double r, std::span<const double> rho0, double sigma) {
    detail::require_ordered(rho0, "weight_phi");
    const std::size_t k = rho0.size();
    if (k == 1) return 0.0;
    const std::size_t j = detail::weight_branch(r, rho0);
    if (j == 0) return sigma * (r - rho0[1]);
    const double left = sigma * (rho0[j - 1] - r);
    const double right = j + 1 < k ? sigma * (r - rho0[j + 1])
                                   : -std::numeric_limits<double>::infinity();
    return detail::log_add_exp(left, right);
}

inline double weight_phi(double r, std::span<const double> rho0, double sigma) {
    return std::exp(log_weight_phi(r, rho0, sigma));
}

inline double weight_phi(double t, double r, const WeightSpec& spec) {
    if (!(r > 1.0)) throw DomainError("weight_phi: requires r > 1");
    const auto rho0 = spec.rho0(t);
    return weight_phi(r, rho0, spec.sigma);
}

/// |u| / Phi computed in log space so neither factor over- or underflows.
inline double ratio_to_weight(double u, double log_phi) {
    const double au = std::abs(u);
    if (au == 0.0) return 0.0;
    return std::exp(std::log(au) - log_phi);
}

/// max_i |u_i| / Phi(t, r_i) over samples at radii r_i.
inline double weighted_norm(std::span<const double> values, std::span<const double> radii,
                            std::span<const double> rho0, double sigma) {
    if (values.empty()) throw ArgumentError("weighted_norm: empty grid");
    if (values.size() != radii.size()) throw ArgumentError("weighted_norm: size mismatch");
    double sup = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sup = std::max(sup, ratio_to_weight(values[i], log_weight_phi(radii[i], rho0, sigma)));
    }
    return sup;
}

/// ||u|| = sup |u/Phi(t, r(y))| over grid nodes.
inline double weighted_norm(std::span<const double> values, const Grid1D& grid,
                            const CatenoidParams& p, double t, const WeightSpec& spec) {
    if (values.size() != grid.size()) throw ArgumentError("weighted_norm: field/grid size mismatch");
    const auto radii = grid.radii(p);
    const auto rho0 = spec.rho0(t);
    return weighted_norm(values, radii, rho0, spec.sigma);
}

}  // namespace catenoid_ac
