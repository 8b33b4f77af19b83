#pragma once

// Interaction constant beta, the layer-offset constants b_l and gamma_j, the gap profile
// eta(t), the leading-order radii rho^0(t) and the first-order Toda system
//
//   rho_j' = -(N-1)/rho_j + beta e^{-sqrt2 (rho_{j+1}-rho_j)} - beta e^{-sqrt2 (rho_j-rho_{j-1})}
//
// with rho_0 = -inf and rho_{k+1} = +inf.

#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/numeric/odeint.hpp>

#include "catenoid_ac/errors.hpp"
#include "catenoid_ac/geometry.hpp"
#include "catenoid_ac/interpolation.hpp"
#include "catenoid_ac/profiles.hpp"

namespace catenoid_ac {

// ---------------------------------------------------------------------------
// beta

struct BetaQuadrature {
    double numerator;    // \int e^{sqrt2 x} (1 - w^2) w' dx
    double denominator;  // \int (w')^2 dx
    double beta;         // 6 * numerator / denominator
    double numerator_error;
    double denominator_error;
};

inline BetaQuadrature compute_beta_detail() {
    // With q = e^{-sqrt2|x|}: (1-w^2) = 4q/(1+q)^2 and w' = (1-w^2)/sqrt2.
    const auto sech4 = [](double q) {
        const double d = 1.0 + q;
        return 16.0 * q * q / (d * d * d * d);
    };
    const auto numerator_pos = [](double x) {  // e^{sqrt2 x} sech^4 = 16 q/(1+q)^4
        const double q = std::exp(-kSqrt2 * x);
        const double d = 1.0 + q;
        return 16.0 * q / (d * d * d * d * kSqrt2);
    };
    const auto numerator_neg = [&](double x) {  // x -> -x, e^{-sqrt2 x} = q
        const double q = std::exp(-kSqrt2 * x);
        return sech4(q) * q / kSqrt2;
    };
    const auto denominator_half = [&](double x) { return 0.5 * sech4(std::exp(-kSqrt2 * x)); };

    boost::math::quadrature::exp_sinh<double> integrator;
    const double inf = std::numeric_limits<double>::infinity();
    const double tol = 1e-14;
    double e1 = 0, e2 = 0, e3 = 0;
    const double num = integrator.integrate(numerator_pos, 0.0, inf, tol, &e1) +
                       integrator.integrate(numerator_neg, 0.0, inf, tol, &e2);
    const double den = 2.0 * integrator.integrate(denominator_half, 0.0, inf, tol, &e3);
    BetaQuadrature out{num, den, 6.0 * num / den, e1 + e2, 2.0 * e3};
    if (!std::isfinite(out.beta) || out.numerator_error > 1e-11 * num ||
        out.denominator_error > 1e-11 * den) {
        throw NumericalError("compute_beta: quadrature did not converge (numerator error " +
                             std::to_string(out.numerator_error) + ", denominator error " +
                             std::to_string(out.denominator_error) + ")");
    }
    return out;
}

inline double compute_beta() {
    static const double beta = compute_beta_detail().beta;
    return beta;
}

// ---------------------------------------------------------------------------
// b_l, gamma_j

/// b_l = -(1/sqrt2) log((k-l) l / (2 beta)), l = 1..k-1 (stored 0-based).
inline std::vector<double> b_constants(int k, double beta) {
    if (k < 2) throw ArgumentError("b_constants: requires k >= 2");
    if (!(beta > 0.0)) throw ArgumentError("b_constants: requires beta > 0");
    std::vector<double> b(static_cast<std::size_t>(k - 1));
    for (int l = 1; l <= k - 1; ++l) {
        b[static_cast<std::size_t>(l - 1)] =
            -std::log(static_cast<double>((k - l) * l) / (2.0 * beta)) / kSqrt2;
    }
    return b;
}

/// -gamma_j = gamma_{k-j+1} = (1/2) sum_{i=j}^{k-j} b_i for j <= k/2; the middle entry
/// of an odd k is zero.
inline std::vector<double> gamma_constants(int k, std::span<const double> b) {
    if (k < 1) throw ArgumentError("gamma_constants: requires k >= 1");
    if (b.size() != static_cast<std::size_t>(k - 1)) {
        throw ArgumentError("gamma_constants: expected k-1 offsets");
    }
    std::vector<double> gamma(static_cast<std::size_t>(k), 0.0);
    for (int j = 1; 2 * j <= k; ++j) {
        double sum = 0.0;
        for (int i = j; i <= k - j; ++i) sum += b[static_cast<std::size_t>(i - 1)];
        gamma[static_cast<std::size_t>(j - 1)] = -0.5 * sum;
        gamma[static_cast<std::size_t>(k - j)] = 0.5 * sum;
    }
    return gamma;
}

inline std::vector<double> gamma_constants(int k, double beta) {
    if (k == 1) return {0.0};
    const auto b = b_constants(k, beta);
    return gamma_constants(k, b);
}

// ---------------------------------------------------------------------------
// eta

/// eta' = -eta/(2t) - beta e^{-sqrt2 eta}
inline double eta_rhs(double t, double eta, double beta) {
    return -eta / (2.0 * t) - beta * std::exp(-kSqrt2 * eta);
}

struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 1e-4;
};

/// Accepted-step samples of eta on [t_end, -1], stored with decreasing t.
class EtaSolution {
public:
    EtaSolution(std::vector<double> times, std::vector<double> eta, std::vector<double> eta_prime,
                double beta)
        : times_(std::move(times)), eta_(std::move(eta)), eta_prime_(std::move(eta_prime)),
          beta_(beta), interp_(times_, eta_, eta_prime_, true) {}

    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<double>& eta() const noexcept { return eta_; }
    const std::vector<double>& eta_prime() const noexcept { return eta_prime_; }
    double beta() const noexcept { return beta_; }

    double t_begin() const { return times_.front(); }
    double t_end() const { return times_.back(); }
    bool covers(double t) const noexcept { return interp_.contains(t); }

    double value(double t) const {
        if (!covers(t)) {
            throw ArgumentError("EtaSolution: t = " + std::to_string(t) + " outside [" +
                                std::to_string(t_end()) + ", " + std::to_string(t_begin()) + "]");
        }
        return interp_.value(t);
    }

    /// eta'(t) from the ODE right-hand side at the interpolated eta.
    double derivative(double t) const { return eta_rhs(t, value(t), beta_); }

private:
    std::vector<double> times_, eta_, eta_prime_;
    double beta_;
    HermiteInterpolant interp_;
};

inline EtaSolution solve_eta(double t_end, double beta, const StepControl& control = {}) {
    namespace odeint = boost::numeric::odeint;
    if (!(t_end < -1.0)) throw ArgumentError("solve_eta: requires t_end < -1");
    using State = std::vector<double>;
    std::vector<double> ts, es, eps;
    auto system = [beta](const State& x, State& dxdt, double t) { dxdt[0] = eta_rhs(t, x[0], beta); };
    auto observer = [&](const State& x, double t) {
        ts.push_back(t);
        es.push_back(x[0]);
        eps.push_back(eta_rhs(t, x[0], beta));
    };
    State x{0.0};
    auto stepper = odeint::make_controlled(control.abs_tol, control.rel_tol,
                                           odeint::runge_kutta_dopri5<State>());
    try {
        odeint::integrate_adaptive(stepper, system, x, -1.0, t_end, -control.initial_step, observer);
    } catch (const odeint::step_adjustment_error& e) {
        throw IntegrationError(std::string("solve_eta: step size underflow: ") + e.what(),
                               ts.empty() ? -1.0 : ts.back());
    }
    if (ts.size() < 2 || std::abs(ts.back() - t_end) > 1e-9 * std::abs(t_end)) {
        throw IntegrationError("solve_eta: integration stopped before t_end",
                               ts.empty() ? -1.0 : ts.back());
    }
    ts.back() = t_end;
    return EtaSolution(std::move(ts), std::move(es), std::move(eps), beta);
}

inline EtaSolution solve_eta(double t_end, const StepControl& control = {}) {
    return solve_eta(t_end, compute_beta(), control);
}

struct EnvelopeFit {
    double c_low;       // min over samples of e^{g(t)}
    double c_high;      // max over samples of e^{g(t)}
    double g_min;
    double g_max;
    bool derivative_ok; // 0 <= -eta' <= c_high log|t|/|t| at every sample
    bool pass;
    std::size_t samples;
};

/// g(t) = sqrt2 eta(t) + log(log|t|/|t|); bounded g is the two-sided envelope of eta.
inline double envelope_g(double t, double eta) {
    const double at = std::abs(t);
    return kSqrt2 * eta + std::log(std::log(at) / at);
}

/// Fits the envelope constants over samples with t in [t_lo, t_hi] (t_hi <= -2).
/// `max_spread` is the admitted ratio c_high/c_low.
inline EnvelopeFit eta_envelope_check(const EtaSolution& sol,
                                      double t_lo = -std::numeric_limits<double>::infinity(),
                                      double t_hi = -2.0, double max_spread = 1e3) {
    EnvelopeFit fit{std::numeric_limits<double>::infinity(), 0.0,
                    std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity(), true, false, 0};
    const auto& ts = sol.times();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double t = ts[i];
        if (t < t_lo || t > std::min(t_hi, -2.0)) continue;
        const double g = envelope_g(t, sol.eta()[i]);
        fit.g_min = std::min(fit.g_min, g);
        fit.g_max = std::max(fit.g_max, g);
        ++fit.samples;
    }
    if (fit.samples == 0) return fit;
    fit.c_low = std::exp(fit.g_min);
    fit.c_high = std::exp(fit.g_max);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double t = ts[i];
        if (t < t_lo || t > std::min(t_hi, -2.0)) continue;
        const double at = std::abs(t);
        const double minus_d = -sol.eta_prime()[i];
        if (!(minus_d >= 0.0 && minus_d <= fit.c_high * std::log(at) / at)) fit.derivative_ok = false;
    }
    fit.pass = std::isfinite(fit.c_low) && std::isfinite(fit.c_high) && fit.c_low > 0.0 &&
               fit.c_high / fit.c_low <= max_spread && fit.derivative_ok;
    return fit;
}

// ---------------------------------------------------------------------------
// Leading-order radii

/// rho^0_j(t) = sqrt(-2(N-1)t) + (j - (k+1)/2) eta(t) + gamma_j, together with the
/// constants it is built from.
class LeadingOrder {
public:
    LeadingOrder(int k, CatenoidParams params, std::shared_ptr<const EtaSolution> eta)
        : k_(k), params_(params), eta_(std::move(eta)) {
        if (k < 1) throw ArgumentError("LeadingOrder: requires k >= 1");
        if (!eta_) throw ArgumentError("LeadingOrder: missing eta solution");
        beta_ = eta_->beta();
        if (k >= 2) b_ = b_constants(k, beta_);
        gamma_ = k >= 2 ? gamma_constants(k, b_) : std::vector<double>{0.0};
    }

    int k() const noexcept { return k_; }
    const CatenoidParams& params() const noexcept { return params_; }
    double beta() const noexcept { return beta_; }
    const std::vector<double>& b() const noexcept { return b_; }
    const std::vector<double>& gamma() const noexcept { return gamma_; }
    const EtaSolution& eta() const noexcept { return *eta_; }
    std::shared_ptr<const EtaSolution> eta_ptr() const noexcept { return eta_; }

    /// Centered index j - (k+1)/2 for 0-based j.
    double centered_index(int j) const noexcept { return (j + 1) - 0.5 * (k_ + 1); }

    std::vector<double> rho(double t) const {
        if (!(t < 0.0)) throw ArgumentError("rho0: requires t < 0");
        const double base = std::sqrt(-2.0 * params_.m() * t);
        std::vector<double> out(static_cast<std::size_t>(k_));
        if (k_ == 1) {
            out[0] = base;
            return out;
        }
        const double e = eta_->value(t);
        for (int j = 0; j < k_; ++j) {
            out[static_cast<std::size_t>(j)] =
                base + centered_index(j) * e + gamma_[static_cast<std::size_t>(j)];
        }
        return out;
    }

    std::vector<double> rho_prime(double t) const {
        if (!(t < 0.0)) throw ArgumentError("rho0: requires t < 0");
        const double base_prime = -params_.m() / std::sqrt(-2.0 * params_.m() * t);
        std::vector<double> out(static_cast<std::size_t>(k_), base_prime);
        if (k_ == 1) return out;
        const double ep = eta_->derivative(t);
        for (int j = 0; j < k_; ++j) out[static_cast<std::size_t>(j)] += centered_index(j) * ep;
        return out;
    }

    Rho0Evaluator evaluator() const {
        return [self = *this](double t) { return self.rho(t); };
    }

private:
    int k_;
    CatenoidParams params_;
    std::shared_ptr<const EtaSolution> eta_;
    double beta_ = 0.0;
    std::vector<double> b_;
    std::vector<double> gamma_;
};

inline std::vector<double> rho0(double t, const LeadingOrder& model) { return model.rho(t); }

// ---------------------------------------------------------------------------
// Toda system

namespace detail {
inline void require_toda_state(std::span<const double> rho, const char* who) {
    if (rho.empty()) throw ArgumentError(std::string(who) + ": empty state");
    if (!(rho[0] > 0.0)) throw StateError(std::string(who) + ": rho_1 must be positive");
    for (std::size_t j = 1; j < rho.size(); ++j) {
        if (!(rho[j] > rho[j - 1])) throw StateError(std::string(who) + ": radii are not ordered");
    }
}

/// beta e^{-sqrt2 (rho_{j+1} - rho_j)} for j = 0..k-2.
inline void interaction_terms(std::span<const double> rho, double beta, std::vector<double>& out) {
    out.resize(rho.size() > 0 ? rho.size() - 1 : 0);
    for (std::size_t j = 0; j + 1 < rho.size(); ++j) {
        out[j] = beta * std::exp(-kSqrt2 * (rho[j + 1] - rho[j]));
    }
}
}  // namespace detail

inline void toda_rhs(std::span<const double> rho, const CatenoidParams& p, double beta,
                     std::span<double> out) {
    detail::require_toda_state(rho, "toda_rhs");
    const std::size_t k = rho.size();
    for (std::size_t j = 0; j < k; ++j) {
        double v = -p.m() / rho[j];
        if (j + 1 < k) v += beta * std::exp(-kSqrt2 * (rho[j + 1] - rho[j]));
        if (j > 0) v -= beta * std::exp(-kSqrt2 * (rho[j] - rho[j - 1]));
        out[j] = v;
    }
}

/// The system is autonomous; t is accepted for interface symmetry with the other flows.
inline std::vector<double> toda_rhs(double /*t*/, std::span<const double> rho,
                                    const CatenoidParams& p, double beta) {
    std::vector<double> out(rho.size());
    toda_rhs(rho, p, beta, out);
    return out;
}

/// rho_j' + (N-1)/rho_j - beta e^{-sqrt2(rho_{j+1}-rho_j)} + beta e^{-sqrt2(rho_j-rho_{j-1})}.
inline std::vector<double> toda_residual(std::span<const double> rho,
                                         std::span<const double> rho_prime,
                                         const CatenoidParams& p, double beta) {
    if (rho.size() != rho_prime.size()) throw ArgumentError("toda_residual: size mismatch");
    const auto rhs = toda_rhs(0.0, rho, p, beta);
    std::vector<double> out(rho.size());
    for (std::size_t j = 0; j < rho.size(); ++j) out[j] = rho_prime[j] - rhs[j];
    return out;
}

/// Residual of a candidate trajectory whose derivative is estimated by centered differences
/// with one Richardson extrapolation; `step` defaults to 1e-3 |t|.
inline std::vector<double> toda_residual(const Rho0Evaluator& candidate, double t,
                                         const CatenoidParams& p, double beta, double step = 0.0) {
    const double h = step > 0.0 ? step : 1e-3 * std::abs(t);
    const auto rho = candidate(t);
    const auto fwd1 = candidate(t + h), bwd1 = candidate(t - h);
    const auto fwd2 = candidate(t + 0.5 * h), bwd2 = candidate(t - 0.5 * h);
    std::vector<double> deriv(rho.size());
    for (std::size_t j = 0; j < rho.size(); ++j) {
        const double d1 = (fwd1[j] - bwd1[j]) / (2.0 * h);
        const double d2 = (fwd2[j] - bwd2[j]) / h;
        deriv[j] = (4.0 * d2 - d1) / 3.0;
    }
    return toda_residual(rho, deriv, p, beta);
}

/// Solution of the Toda system sampled at accepted steps, with h = rho - rho^0.
/// Row-major in the layer index: rho[j][m] is layer j at times[m].
class TodaTrajectory {
public:
    TodaTrajectory(std::vector<double> times, std::vector<std::vector<double>> rho,
                   std::vector<std::vector<double>> rho_prime, std::vector<std::vector<double>> h,
                   std::vector<std::vector<double>> h_prime)
        : times_(std::move(times)), rho_(std::move(rho)), rho_prime_(std::move(rho_prime)),
          h_(std::move(h)), h_prime_(std::move(h_prime)) {
        for (std::size_t j = 0; j < rho_.size(); ++j) {
            dense_.emplace_back(times_, rho_[j], rho_prime_[j], false);
        }
    }

    int k() const noexcept { return static_cast<int>(rho_.size()); }
    std::size_t samples() const noexcept { return times_.size(); }
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<std::vector<double>>& rho() const noexcept { return rho_; }
    const std::vector<std::vector<double>>& rho_prime() const noexcept { return rho_prime_; }
    const std::vector<std::vector<double>>& h() const noexcept { return h_; }
    const std::vector<std::vector<double>>& h_prime() const noexcept { return h_prime_; }

    bool covers(double t) const noexcept { return !dense_.empty() && dense_.front().contains(t); }

    /// Dense evaluation between accepted steps (cubic Hermite with the exact slopes).
    std::vector<double> rho_at(double t) const {
        std::vector<double> out(dense_.size());
        for (std::size_t j = 0; j < dense_.size(); ++j) out[j] = dense_[j].value(t);
        return out;
    }

    std::vector<double> rho_prime_at(double t) const {
        std::vector<double> out(dense_.size());
        for (std::size_t j = 0; j < dense_.size(); ++j) out[j] = dense_[j].derivative(t);
        return out;
    }

private:
    std::vector<double> times_;
    std::vector<std::vector<double>> rho_, rho_prime_, h_, h_prime_;
    std::vector<HermiteInterpolant> dense_;
};

struct TodaControl {
    double rel_tol = 1e-12;
    double abs_tol = 1e-12;
    double initial_step = 1e-3;
};

/// Integrates the Toda system forward from rho(t0) = init to t_end. `reference` supplies
/// rho^0 for the stored correction h and must cover [t0, t_end].
inline TodaTrajectory solve_toda(double t0, double t_end, std::vector<double> init,
                                 const LeadingOrder& reference, const TodaControl& control = {}) {
    namespace odeint = boost::numeric::odeint;
    if (!(t0 < t_end)) throw ArgumentError("solve_toda: requires t0 < t_end");
    if (!(t_end <= -2.0)) throw ArgumentError("solve_toda: requires t_end <= -2");
    if (init.size() != static_cast<std::size_t>(reference.k())) {
        throw ArgumentError("solve_toda: initial state has the wrong number of layers");
    }
    detail::require_toda_state(init, "solve_toda");
    const auto& p = reference.params();
    const double beta = reference.beta();
    const std::size_t k = init.size();

    using State = std::vector<double>;
    std::vector<double> times;
    std::vector<State> states;
    double last_time = t0;
    auto system = [&](const State& x, State& dxdt, double) { toda_rhs(x, p, beta, dxdt); };
    auto observer = [&](const State& x, double t) {
        for (std::size_t j = 0; j < k; ++j) {
            const bool ok = j == 0 ? x[0] > 0.0 : x[j] > x[j - 1];
            if (!ok || !std::isfinite(x[j])) {
                throw IntegrationError("solve_toda: interface ordering lost", t);
            }
        }
        times.push_back(t);
        states.push_back(x);
        last_time = t;
    };
    auto stepper = odeint::make_controlled(control.abs_tol, control.rel_tol,
                                           odeint::runge_kutta_dopri5<State>());
    try {
        odeint::integrate_adaptive(stepper, system, init, t0, t_end, control.initial_step, observer);
    } catch (const StateError& e) {
        throw IntegrationError(std::string("solve_toda: interface ordering lost after t = ") +
                                   std::to_string(last_time) + " (" + e.what() + ")",
                               last_time);
    } catch (const odeint::step_adjustment_error& e) {
        throw IntegrationError(std::string("solve_toda: step size underflow: ") + e.what(), last_time);
    }

    if (times.size() < 2 || std::abs(times.back() - t_end) > 1e-9 * std::abs(t_end)) {
        throw IntegrationError("solve_toda: integration stopped before t_end", last_time);
    }
    times.back() = t_end;

    const std::size_t M = times.size();
    std::vector<std::vector<double>> rho(k, std::vector<double>(M)), rho_p(k, std::vector<double>(M)),
        h(k, std::vector<double>(M)), h_p(k, std::vector<double>(M));
    std::vector<double> deriv(k);
    for (std::size_t m = 0; m < M; ++m) {
        toda_rhs(states[m], p, beta, deriv);
        const auto r0 = reference.rho(times[m]);
        const auto r0p = reference.rho_prime(times[m]);
        for (std::size_t j = 0; j < k; ++j) {
            rho[j][m] = states[m][j];
            rho_p[j][m] = deriv[j];
            h[j][m] = states[m][j] - r0[j];
            h_p[j][m] = deriv[j] - r0p[j];
        }
    }
    return TodaTrajectory(std::move(times), std::move(rho), std::move(rho_p), std::move(h),
                          std::move(h_p));
}

struct AprioriMeasure {
    double sup_h;
    double sup_scaled_h_prime;  // sup (|t|/log|t|) |h'|
    double total() const noexcept { return sup_h + sup_scaled_h_prime; }
};

/// The two seminorms of the admissible correction class, restricted to samples in [t_lo, t_hi].
inline AprioriMeasure apriori_measure(const TodaTrajectory& traj,
                                      double t_lo = -std::numeric_limits<double>::infinity(),
                                      double t_hi = -2.0) {
    AprioriMeasure out{0.0, 0.0};
    const auto& ts = traj.times();
    for (std::size_t m = 0; m < ts.size(); ++m) {
        if (ts[m] < t_lo || ts[m] > t_hi) continue;
        const double at = std::abs(ts[m]);
        for (int j = 0; j < traj.k(); ++j) {
            out.sup_h = std::max(out.sup_h, std::abs(traj.h()[j][m]));
            out.sup_scaled_h_prime =
                std::max(out.sup_scaled_h_prime, at / std::log(at) * std::abs(traj.h_prime()[j][m]));
        }
    }
    return out;
}

/// Two-term asymptotics sqrt(-2(N-1)t) + (1/sqrt2)(j - (k+1)/2) log(|t|/log|t|), j 1-based.
inline double asymptotic_rho(double t, int j, int k, const CatenoidParams& p) {
    if (!(t <= -10.0)) throw ArgumentError("asymptotic_rho: requires t <= -10");
    if (j < 1 || j > k) throw ArgumentError("asymptotic_rho: layer index out of range");
    const double at = std::abs(t);
    return std::sqrt(-2.0 * p.m() * t) + (j - 0.5 * (k + 1)) * std::log(at / std::log(at)) / kSqrt2;
}

}  // namespace catenoid_ac
