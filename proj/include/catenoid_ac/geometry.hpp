#pragma once

// Catenoid graph F(r), the neck-distance coordinate y = sqrt(r^{2(N-1)} - 1) and the
// coefficients of the radial Laplace-Beltrami operator in both coordinates.

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "catenoid_ac/errors.hpp"

namespace catenoid_ac {

/// Dimension of the catenoid M in R^{N+1}. Exponents used by the coordinate maps are
/// precomputed once.
class CatenoidParams {
public:
    explicit CatenoidParams(int N) : N_(N) {
        if (N < 2) throw ArgumentError("CatenoidParams: N must be >= 2, got " + std::to_string(N));
        const double m = N - 1.0;
        two_m_ = 2.0 * m;
        r_exponent_ = 1.0 / (2.0 * m);
        b_exponent_ = (2.0 * N - 3.0) / (2.0 * m);
        ratio_exponent_ = (N - 2.0) / m;
    }

    int N() const noexcept { return N_; }
    /// N - 1 as a double.
    double m() const noexcept { return N_ - 1.0; }
    /// 2(N-1)
    double two_m() const noexcept { return two_m_; }
    /// 1 / (2(N-1)), the exponent in r(y) = (1+y^2)^{1/(2(N-1))}.
    double r_exponent() const noexcept { return r_exponent_; }
    /// (2N-3) / (2(N-1)), the exponent of the flux coefficient b(y).
    double b_exponent() const noexcept { return b_exponent_; }
    /// (N-2)/(N-1)
    double ratio_exponent() const noexcept { return ratio_exponent_; }

    bool operator==(const CatenoidParams&) const = default;

private:
    int N_;
    double two_m_;
    double r_exponent_;
    double b_exponent_;
    double ratio_exponent_;
};

namespace detail {

/// log(1 + y^2) without overflow for very large y.
inline double log1p_square(double y) {
    const double ay = std::abs(y);
    if (ay > 1e150) return 2.0 * std::log(ay);
    return std::log1p(ay * ay);
}

/// r^{2(N-1)} - 1 evaluated through expm1, so it stays accurate next to the neck.
inline double neck_power_minus_one(double r, const CatenoidParams& p, const char* who) {
    const double e = p.two_m() * std::log(r);
    if (e > std::log(std::numeric_limits<double>::max())) {
        throw DomainError(std::string(who) + ": r^{2(N-1)} overflows double precision");
    }
    return std::expm1(e);
}

}  // namespace detail

/// F_r(r) = 1/sqrt(r^{2N-2} - 1).
inline double catenoid_slope(double r, const CatenoidParams& p) {
    if (!(r > 1.0)) throw DomainError("catenoid_slope: requires r > 1 (slope is singular at the neck)");
    return 1.0 / std::sqrt(detail::neck_power_minus_one(r, p, "catenoid_slope"));
}

/// F(r) = \int_1^r F_r(s) ds with F(1) = 0.
///
/// The substitution s = 1 + u^2 turns the integrand into 2 / sqrt(P(s)) with
/// P(s) = (s^{2N-2} - 1)/(s - 1) = sum_{m=0}^{2N-3} s^m, which is smooth at u = 0.
inline double catenoid_height(double r, const CatenoidParams& p) {
    if (!(r >= 1.0)) throw DomainError("catenoid_height: requires r >= 1");
    if (r == 1.0) return 0.0;
    const int degree = 2 * p.N() - 3;
    auto integrand = [degree](double u) {
        const double s = 1.0 + u * u;
        double poly = 1.0;
        double term = 1.0;
        for (int m = 1; m <= degree; ++m) {
            term *= s;
            poly += term;
        }
        return 2.0 / std::sqrt(poly);
    };
    const double upper = std::sqrt(r - 1.0);
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, 0.0, upper, 20, 1e-14, &error);
    if (!std::isfinite(value)) throw NumericalError("catenoid_height: quadrature diverged");
    return value;
}

/// r(y) = (1+y^2)^{1/(2(N-1))}.
inline double r_of_y(double y, const CatenoidParams& p) {
    if (!(y >= 0.0)) throw DomainError("r_of_y: requires y >= 0");
    return std::exp(p.r_exponent() * detail::log1p_square(y));
}

/// y(r) = sqrt(r^{2(N-1)} - 1), inverse of r_of_y.
inline double y_of_r(double r, const CatenoidParams& p) {
    if (!(r >= 1.0)) throw DomainError("y_of_r: requires r >= 1");
    return std::sqrt(detail::neck_power_minus_one(r, p, "y_of_r"));
}

struct DivergenceCoeffs {
    double a;
    double b;
};

/// Coefficients of (N-1)^2 (1/a) d/dy (b v_y):
/// a = (1+y^2)^{1/(2(N-1))}, b = (1+y^2)^{(2N-3)/(2(N-1))}.
inline DivergenceCoeffs divergence_form_coeffs(double y, const CatenoidParams& p) {
    if (!(y >= 0.0)) throw DomainError("divergence_form_coeffs: requires y >= 0");
    const double l = detail::log1p_square(y);
    return {std::exp(p.r_exponent() * l), std::exp(p.b_exponent() * l)};
}

/// b(y) alone; the flux coefficient is even in y, so negative arguments are allowed here.
inline double flux_coefficient(double y, const CatenoidParams& p) {
    return std::exp(p.b_exponent() * detail::log1p_square(y));
}

struct RadialCoeffs {
    double diffusion;
    double drift;
};

/// Coefficients of u_t = diffusion * u_rr + drift * u_r + f(u) in the r coordinate.
inline RadialCoeffs r_form_coeffs(double r, const CatenoidParams& p) {
    if (!(r > 1.0)) throw DomainError("r_form_coeffs: requires r > 1");
    // (r^{2m} - 1)/r^{2m} = -expm1(-2m log r)
    return {-std::expm1(-p.two_m() * std::log(r)), p.m() / r};
}

/// dr/dy = y r / ((N-1)(1+y^2)).
inline double r_prime_of_y(double y, const CatenoidParams& p) {
    const double r = r_of_y(y, p);
    return y * r / (p.m() * (1.0 + y * y));
}

}  // namespace catenoid_ac
