#pragma once

// Projections onto the translated kernels w'(r(y) - rho_j), the Gram matrix of those
// kernels, the error term E left by the ansatz and the linear system for the multipliers d_i.
// Every integral is a trapezoid rule on the uniform y grid.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "catenoid_ac/errors.hpp"
#include "catenoid_ac/geometry.hpp"
#include "catenoid_ac/grid.hpp"
#include "catenoid_ac/pde_solver.hpp"
#include "catenoid_ac/profiles.hpp"
#include "catenoid_ac/reduced_dynamics.hpp"

namespace catenoid_ac {

namespace detail {

inline double trapezoid(std::span<const double> values, double h) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return h * (sum - 0.5 * (values.front() + values.back()));
}

}  // namespace detail

/// Upper bound for \int_{y_max}^\infty w'(r(y) - rho) r(y) dy from w' <= 2 sqrt2 e^{-sqrt2 |x|}.
/// Infinite when the kernel is not yet decaying at the boundary.
inline double kernel_tail_bound(const Grid1D& grid, double rho, const CatenoidParams& p) {
    const double R = r_of_y(grid.y_max(), p);
    const double m = p.m();
    if (!(R > rho) || !(kSqrt2 > m / R)) return std::numeric_limits<double>::infinity();
    // (N-1) r^{2m}/sqrt(r^{2m}-1) <= (N-1) r^m / sqrt(1 - R^{-2m}) for r >= R
    const double jac = m / std::sqrt(-std::expm1(-2.0 * m * std::log(R)));
    return jac * 2.0 * kSqrt2 * std::exp(-kSqrt2 * (R - rho) + m * std::log(R)) / (kSqrt2 - m / R);
}

struct KernelProjection {
    double value;
    double tail_bound;  // sup|psi| times the kernel mass beyond y_max
};

/// \int_0^\infty psi(y) w'(r(y) - rho_j) r(y) dy
inline KernelProjection kernel_inner_product(const Field& field, double rho_j, const Grid1D& grid,
                                             const CatenoidParams& p) {
    if (field.values.size() != grid.size()) throw ArgumentError("kernel_inner_product: field/grid size mismatch");
    std::vector<double> integrand(grid.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = r_of_y(grid.y(i), p);
        integrand[i] = field.values[i] * w1(r - rho_j) * r;
        sup = std::max(sup, std::abs(field.values[i]));
    }
    const double tail = sup == 0.0 ? 0.0 : sup * kernel_tail_bound(grid, rho_j, p);
    return {detail::trapezoid(integrand, grid.spacing()), tail};
}

struct GramMatrix {
    Eigen::MatrixXd entries;
    double t = std::numeric_limits<double>::quiet_NaN();

    /// min_i (|G_ii| - sum_{j != i} |G_ij|) / |G_ii|; positive means strictly dominant.
    double dominance_margin() const {
        double margin = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < entries.rows(); ++i) {
            double off = 0.0;
            for (Eigen::Index j = 0; j < entries.cols(); ++j) {
                if (j != i) off += std::abs(entries(i, j));
            }
            const double d = std::abs(entries(i, i));
            margin = std::min(margin, (d - off) / d);
        }
        return margin;
    }
    bool diagonally_dominant() const { return dominance_margin() > 0.0; }
};

/// G_ij = \int w'(r(y) - rho_i) w'(r(y) - rho_j) r(y) dy
inline GramMatrix gram_matrix(const LayerState& L, const Grid1D& grid, const CatenoidParams& p,
                              double t = std::numeric_limits<double>::quiet_NaN()) {
    const int k = L.k();
    const auto radii = grid.radii(p);
    std::vector<std::vector<double>> kernels(static_cast<std::size_t>(k), std::vector<double>(grid.size()));
    for (int j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < grid.size(); ++i) kernels[j][i] = w1(radii[i] - L.rho(j));
    }
    GramMatrix G{Eigen::MatrixXd(k, k), t};
    std::vector<double> integrand(grid.size());
    for (int a = 0; a < k; ++a) {
        for (int b = a; b < k; ++b) {
            for (std::size_t i = 0; i < grid.size(); ++i) {
                integrand[i] = kernels[a][i] * kernels[b][i] * radii[i];
            }
            G.entries(a, b) = G.entries(b, a) = detail::trapezoid(integrand, grid.spacing());
        }
    }
    return G;
}

// ---------------------------------------------------------------------------
// Error term

/// E = drift + curvature + interaction with
///   drift       = sum_i s_i w'_i (rho_i' + (N-1)/r)
///   curvature   = -sum_i s_i w''_i / (1 + y^2)
///   interaction = f(z) - sum_i s_i f(w_i)
/// where s_i = (-1)^{i+1} and w_i = w(r - rho_i).
struct ErrorComponents {
    std::vector<double> drift;
    std::vector<double> curvature;
    std::vector<double> interaction;

    std::vector<double> total() const {
        std::vector<double> out(drift.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = drift[i] + curvature[i] + interaction[i];
        return out;
    }
};

namespace detail {

/// f(z) - sum_i s_i f(w_i) at radius r.
///
/// Around layer j (the branch containing r) the ansatz is written as z = s_j w_j + g with
/// g = sum_{i<j} s_i (w_i - 1) + sum_{i>j} s_i (w_i + 1); every piece of g is exponentially
/// small and computed from the complements, and f(s_j w_j + g) - f(s_j w_j) is expanded
/// exactly as a cubic in g.
inline double interaction_term(double r, std::span<const double> rho) {
    const std::size_t k = rho.size();
    if (k == 1) return 0.0;
    std::size_t j = k - 1;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        if (r <= 0.5 * (rho[i] + rho[i + 1])) {
            j = i;
            break;
        }
    }
    double g = 0.0;
    double others = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (i == j) continue;
        const double s = LayerState::sign(static_cast<int>(i));
        const double x = r - rho[i];
        g += i < j ? -s * one_minus_w(x) : s * one_plus_w(x);
        others += s * f_of_w(x);
    }
    const double sj = LayerState::sign(static_cast<int>(j));
    const double wj = w(r - rho[j]);
    const double a = sj * wj;
    // f(a + g) - f(a) = (1 - 3a^2) g - 3 a g^2 - g^3, with 1 - 3a^2 = 3(1 - a^2) - 2
    const double linear = 3.0 * one_minus_w_squared(r - rho[j]) - 2.0;
    return linear * g - 3.0 * a * g * g - g * g * g - others;
}

}  // namespace detail

inline ErrorComponents error_term_components(const Grid1D& grid, const LayerState& L,
                                             std::span<const double> rho_prime,
                                             const CatenoidParams& p) {
    if (rho_prime.size() != static_cast<std::size_t>(L.k())) {
        throw ArgumentError("error_term_E: rho_prime must have one entry per layer");
    }
    const std::size_t n = grid.size();
    ErrorComponents out{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double y = grid.y(i);
        const double r = r_of_y(y, p);
        const double geometric = 1.0 / (1.0 + y * y);
        double drift = 0.0, curvature = 0.0;
        for (int j = 0; j < L.k(); ++j) {
            const double s = LayerState::sign(j);
            const double x = r - L.rho(j);
            drift += s * w1(x) * (rho_prime[static_cast<std::size_t>(j)] + p.m() / r);
            curvature -= s * w2(x) * geometric;
        }
        out.drift[i] = drift;
        out.curvature[i] = curvature;
        out.interaction[i] = detail::interaction_term(r, L.rho());
    }
    return out;
}

struct ErrorTermOptions {
    bool curvature_term = true;   // keep -w''_i/(1+y^2)
    bool pointwise_drift = false; // substitute rho_i' = -(N-1)/r, which cancels the drift group
};

inline std::vector<double> error_term_E(double /*t*/, const Grid1D& grid, const LayerState& L,
                                        std::span<const double> rho_prime, const CatenoidParams& p,
                                        const ErrorTermOptions& options = {}) {
    auto c = error_term_components(grid, L, rho_prime, p);
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (options.pointwise_drift ? 0.0 : c.drift[i]) +
                 (options.curvature_term ? c.curvature[i] : 0.0) + c.interaction[i];
    }
    return out;
}

/// Uniform y grid covering r in [1, rho_k + margin] whose spacing resolves the layers with
/// radial step at most dr.
inline Grid1D layer_grid(std::span<const double> rho, const CatenoidParams& p, double margin = 40.0,
                         double dr = 0.02) {
    const double r_hi = rho.back() + margin;
    const double y_max = y_of_r(r_hi, p);
    // dy/dr = (N-1) r^{2N-3}/y, evaluated over the band occupied by the layers
    auto dy_dr = [&](double r) {
        const double y = y_of_r(r, p);
        return p.m() * std::exp((2.0 * p.N() - 3.0) * std::log(r)) / y;
    };
    const double r_lo = std::max(1.0 + 1e-3, rho.front() - 20.0);
    const double slope = std::min({dy_dr(r_lo), dy_dr(rho.front()), dy_dr(rho.back() + 20.0)});
    const double hy = dr * slope;
    const auto n = static_cast<std::size_t>(std::ceil(y_max / hy)) + 1;
    return Grid1D(y_max, std::max<std::size_t>(n, 8));
}

struct ErrorBoundSample {
    double t;
    double sup_E_over_phi;
    double ratio;  // sup |E|/Phi divided by (log|t|/|t|)^nu
};

/// sup_grid |E|/Phi for the leading-order configuration at time t, with rho' taken from the
/// Toda right-hand side at rho^0.
inline double sup_error_over_weight(double t, double sigma, const LeadingOrder& model,
                                    double dr = 0.02) {
    const auto& p = model.params();
    const auto r0 = model.rho(t);
    const LayerState L(r0);
    const auto rho_prime = toda_rhs(t, r0, p, model.beta());
    const Grid1D grid = layer_grid(r0, p, 40.0, dr);
    const auto E = error_term_E(t, grid, L, rho_prime, p);
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = r_of_y(grid.y(i), p);
        sup = std::max(sup, ratio_to_weight(E[i], log_weight_phi(r, r0, sigma)));
    }
    return sup;
}

inline std::vector<ErrorBoundSample> error_bound_ratio(std::span<const double> t_samples, double sigma,
                                                       const LeadingOrder& model, double dr = 0.02) {
    if (!(sigma > 0.0 && sigma < kSqrt2)) throw ArgumentError("error_bound_ratio: sigma must lie in (0, sqrt 2)");
    const double nu = (kSqrt2 - sigma) / (2.0 * kSqrt2);
    std::vector<ErrorBoundSample> out;
    out.reserve(t_samples.size());
    for (double t : t_samples) {
        if (!(t <= -2.0)) throw ArgumentError("error_bound_ratio: sample times must be <= -2");
        const double sup = sup_error_over_weight(t, sigma, model, dr);
        const double at = std::abs(t);
        out.push_back({t, sup, sup / std::pow(std::log(at) / at, nu)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Multipliers d_i

struct ProjectionCoeffs {
    std::vector<double> d;
    double t = std::numeric_limits<double>::quiet_NaN();
};

struct ProjectionOptions {
    bool nonlinear_term = true;  // include N(psi) in the forcing integral
};

/// Solves sum_i d_i G_ij = -rho_j' \int psi w''_j r dy + (N-1) \int psi (w''_j y)_y dy
///                         + \int f'(z) psi w'_j r dy + \int (E + N(psi)) w'_j r dy.
/// `E` may be empty (treated as zero). (w''_j y)_y = w''_j + w'''_j r'(y) y is evaluated
/// analytically, so psi is never differenced.
inline ProjectionCoeffs solve_projection_coeffs(const Field& psi, const LayerState& L,
                                                std::span<const double> rho_prime, const Grid1D& grid,
                                                const CatenoidParams& p, std::span<const double> E = {},
                                                const ProjectionOptions& options = {}) {
    const int k = L.k();
    const std::size_t n = grid.size();
    if (psi.values.size() != n) throw ArgumentError("solve_projection_coeffs: field/grid size mismatch");
    if (!E.empty() && E.size() != n) throw ArgumentError("solve_projection_coeffs: E/grid size mismatch");
    if (rho_prime.size() != static_cast<std::size_t>(k)) {
        throw ArgumentError("solve_projection_coeffs: rho_prime must have one entry per layer");
    }
    const GramMatrix G = gram_matrix(L, grid, p, psi.t);
    if (!G.diagonally_dominant()) {
        throw StateError("solve_projection_coeffs: Gram matrix is not diagonally dominant (margin " +
                         std::to_string(G.dominance_margin()) + ")");
    }
    std::vector<double> radii(n), zs(n), forcing(n);
    for (std::size_t i = 0; i < n; ++i) {
        radii[i] = r_of_y(grid.y(i), p);
        zs[i] = ansatz_z(radii[i], L);
        const double e = E.empty() ? 0.0 : E[i];
        forcing[i] = e + (options.nonlinear_term ? nonlinear_remainder(psi.values[i], zs[i]) : 0.0);
    }
    Eigen::VectorXd rhs(k);
    std::vector<double> integrand(n);
    for (int j = 0; j < k; ++j) {
        const double rj = L.rho(j);
        for (std::size_t i = 0; i < n; ++i) {
            const double y = grid.y(i);
            const double r = radii[i];
            const double x = r - rj;
            const double ps = psi.values[i];
            const double dr_dy = y * r / (p.m() * (1.0 + y * y));
            const double transport = -rho_prime[static_cast<std::size_t>(j)] * ps * w2(x) * r;
            const double geometric = p.m() * ps * (w2(x) + w3(x) * dr_dy * y);
            const double linear = fprime(zs[i]) * ps * w1(x) * r;
            const double source = forcing[i] * w1(x) * r;
            integrand[i] = transport + geometric + linear + source;
        }
        rhs(j) = detail::trapezoid(integrand, grid.spacing());
    }
    const Eigen::VectorXd d = G.entries.partialPivLu().solve(rhs);
    ProjectionCoeffs out{std::vector<double>(static_cast<std::size_t>(k)), psi.t};
    for (int j = 0; j < k; ++j) out.d[static_cast<std::size_t>(j)] = d(j);
    return out;
}

}  // namespace catenoid_ac
