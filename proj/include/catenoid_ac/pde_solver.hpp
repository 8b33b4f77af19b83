#pragma once

// Method-of-lines evolution of
//
//   v_t = (N-1)^2 (1/a(y)) d/dy (b(y) v_y) + f(v),   y in (0, y_max),
//
// with the even reflection v(-y) = v(y) at the neck and a Dirichlet far field.
// Diffusion is treated with a theta scheme and the reaction explicitly.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "catenoid_ac/errors.hpp"
#include "catenoid_ac/geometry.hpp"
#include "catenoid_ac/grid.hpp"
#include "catenoid_ac/profiles.hpp"

namespace catenoid_ac {

struct Field {
    double t = 0.0;
    std::vector<double> values;
};

/// Dirichlet value at y_max.
class FarField {
public:
    enum class Kind { fixed_constant, ansatz_tracking };

    static FarField fixed(double value) { return FarField(Kind::fixed_constant, value, {}); }
    static FarField tracking(std::function<double(double)> value_at) {
        if (!value_at) throw ArgumentError("FarField: tracking condition needs a value function");
        return FarField(Kind::ansatz_tracking, 0.0, std::move(value_at));
    }

    Kind kind() const noexcept { return kind_; }
    double at(double t) const { return kind_ == Kind::fixed_constant ? value_ : track_(t); }

private:
    FarField(Kind kind, double value, std::function<double(double)> track)
        : kind_(kind), value_(value), track_(std::move(track)) {}

    Kind kind_;
    double value_;
    std::function<double(double)> track_;
};

enum class Reaction {
    none,            // pure diffusion
    explicit_euler,  // f(v^n)
    heun,            // predictor with f(v^n), corrector with (f(v^n) + f(v*))/2
    // A source term is averaged the same way unless the reaction is explicit_euler.
};

struct SolverConfig {
    double theta = 0.5;
    double dt = 0.1;
    FarField far_field = FarField::fixed(-1.0);
    Reaction reaction = Reaction::heun;
    double envelope = 1.5;
    std::function<double(double t, double y)> source;  // optional forcing, for manufactured solutions

    void validate() const {
        if (!(theta >= 0.5 && theta <= 1.0)) throw ArgumentError("SolverConfig: theta must lie in [1/2, 1]");
        if (!(dt > 0.0)) throw ArgumentError("SolverConfig: dt must be positive");
    }
};

/// Default time step min(0.2, h).
inline double default_time_step(const Grid1D& grid) { return std::min(0.2, grid.spacing()); }

/// Flux-form stencil coefficients for a fixed grid and dimension.
class SpatialOperator {
public:
    SpatialOperator(const Grid1D& grid, const CatenoidParams& p) : n_(grid.size()) {
        const double h = grid.spacing();
        const double scale = p.m() * p.m() / (h * h);
        c_.resize(n_);
        b_half_.resize(n_ - 1);
        for (std::size_t i = 0; i < n_; ++i) {
            c_[i] = scale / divergence_form_coeffs(grid.y(i), p).a;
        }
        // b is smooth, so it is evaluated at half nodes directly.
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            b_half_[i] = flux_coefficient(grid.y(i) + 0.5 * h, p);
        }
    }

    std::size_t size() const noexcept { return n_; }

    /// Coupling of node i to node i-1 (lower) and i+1 (upper); row 0 folds in the ghost node.
    double lower(std::size_t i) const noexcept { return i == 0 ? 0.0 : c_[i] * b_half_[i - 1]; }
    double upper(std::size_t i) const noexcept {
        return i == 0 ? 2.0 * c_[0] * b_half_[0] : c_[i] * b_half_[i];
    }

    /// (L v)_i for i < n-1; the Dirichlet node n-1 gets 0.
    void apply(std::span<const double> v, std::span<double> out) const {
        out[0] = upper(0) * (v[1] - v[0]);
        for (std::size_t i = 1; i + 1 < n_; ++i) {
            out[i] = upper(i) * (v[i + 1] - v[i]) - lower(i) * (v[i] - v[i - 1]);
        }
        out[n_ - 1] = 0.0;
    }

private:
    std::size_t n_;
    std::vector<double> c_;       // (N-1)^2 / (a_i h^2)
    std::vector<double> b_half_;  // b(y_{i+1/2})
};

inline std::vector<double> apply_spatial_operator(const Field& field, const Grid1D& grid,
                                                  const CatenoidParams& p) {
    if (field.values.size() < 3) throw ArgumentError("apply_spatial_operator: need at least 3 nodes");
    if (field.values.size() != grid.size()) throw ArgumentError("apply_spatial_operator: field/grid size mismatch");
    SpatialOperator op(grid, p);
    std::vector<double> out(grid.size());
    op.apply(field.values, out);
    return out;
}

/// Factorised (I - theta dt L) on the unknown nodes 0..n-2 (Thomas algorithm).
class ImplicitDiffusion {
public:
    ImplicitDiffusion(const SpatialOperator& op, double theta_dt) : theta_dt_(theta_dt) {
        const std::size_t m = op.size() - 1;
        diag_.resize(m);
        upper_.resize(m);
        lower_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            lower_[i] = -theta_dt * op.lower(i);
            upper_[i] = -theta_dt * op.upper(i);
            diag_[i] = 1.0 + theta_dt * (op.lower(i) + op.upper(i));
        }
        // forward elimination of the matrix part
        cprime_.resize(m);
        denom_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double d = diag_[i] - (i > 0 ? lower_[i] * cprime_[i - 1] : 0.0);
            if (!(std::abs(d) > 0.0) || !std::isfinite(d)) {
                throw NumericalError("ImplicitDiffusion: singular tridiagonal system");
            }
            denom_[i] = d;
            cprime_[i] = upper_[i] / d;
        }
    }

    /// Solves in place; rhs holds n entries, the last one is the Dirichlet value.
    void solve(std::span<double> rhs) const {
        const std::size_t m = diag_.size();
        const double boundary = rhs[m];
        rhs[m - 1] -= upper_[m - 1] * boundary;
        rhs[0] /= denom_[0];
        for (std::size_t i = 1; i < m; ++i) rhs[i] = (rhs[i] - lower_[i] * rhs[i - 1]) / denom_[i];
        for (std::size_t i = m - 1; i-- > 0;) rhs[i] -= cprime_[i] * rhs[i + 1];
    }

    double theta_dt() const noexcept { return theta_dt_; }

private:
    double theta_dt_;
    std::vector<double> diag_, upper_, lower_, cprime_, denom_;
};

/// Advances fields on one grid; the factorisation is cached per step size.
class ThetaStepper {
public:
    ThetaStepper(const Grid1D& grid, const CatenoidParams& p, SolverConfig cfg)
        : op_(grid, p), cfg_(std::move(cfg)), nodes_(grid.nodes()) {
        cfg_.validate();
        work_.resize(grid.size());
        lv_.resize(grid.size());
        f0_.resize(grid.size());
        pred_.resize(grid.size());
    }

    const SolverConfig& config() const noexcept { return cfg_; }
    const SpatialOperator& op() const noexcept { return op_; }

    /// v^{n+1} from (I - theta dt L) v^{n+1} = v^n + dt ((1-theta) L v^n + reaction).
    Field step(const Field& field, double dt) {
        if (!(dt > 0.0)) throw ArgumentError("step: dt must be positive");
        if (field.values.size() != op_.size()) throw ArgumentError("step: field/grid size mismatch");
        const ImplicitDiffusion& solver = factor(dt);
        const std::size_t n = op_.size();
        const std::vector<double>& v = field.values;
        const double t_new = field.t + dt;
        const double boundary = cfg_.far_field.at(t_new);
        const double explicit_weight = (1.0 - cfg_.theta) * dt;

        const bool heun = cfg_.reaction == Reaction::heun;
        op_.apply(v, lv_);
        for (std::size_t i = 0; i < n; ++i) {
            f0_[i] = cfg_.reaction == Reaction::none ? 0.0 : f(v[i]);
            if (cfg_.source) f0_[i] += cfg_.source(field.t, nodes_[i]);
            work_[i] = v[i] + explicit_weight * lv_[i] + dt * f0_[i];
        }
        work_[n - 1] = boundary;
        solver.solve(work_);

        if (heun || (cfg_.source && cfg_.reaction == Reaction::none)) {
            pred_.swap(work_);
            for (std::size_t i = 0; i < n; ++i) {
                double f1 = cfg_.reaction == Reaction::none ? 0.0 : f(pred_[i]);
                if (cfg_.source) f1 += cfg_.source(t_new, nodes_[i]);
                work_[i] = v[i] + explicit_weight * lv_[i] + 0.5 * dt * (f0_[i] + f1);
            }
            work_[n - 1] = boundary;
            solver.solve(work_);
        }
        return Field{t_new, work_};
    }

private:
    const ImplicitDiffusion& factor(double dt) {
        const double theta_dt = cfg_.theta * dt;
        if (!factor_ || factor_->theta_dt() != theta_dt) factor_.emplace(op_, theta_dt);
        return *factor_;
    }

    SpatialOperator op_;
    SolverConfig cfg_;
    std::vector<double> nodes_;
    std::optional<ImplicitDiffusion> factor_;
    std::vector<double> work_, lv_, f0_, pred_;
};

inline Field step(const Field& field, const SolverConfig& cfg, const Grid1D& grid,
                  const CatenoidParams& p) {
    ThetaStepper stepper(grid, p, cfg);
    return stepper.step(field, cfg.dt);
}

/// z(t0, r(y_i)); the outermost layer must sit at least 10 units inside r(y_max).
inline Field initialize_from_ansatz(const Grid1D& grid, double t0, const LayerState& L,
                                    const CatenoidParams& p) {
    const double r_max = r_of_y(grid.y_max(), p);
    if (r_max < L.rho().back() + 10.0) {
        throw ConfigurationError("initialize_from_ansatz: r(y_max) = " + std::to_string(r_max) +
                                 " is closer than 10 to the outer layer at " +
                                 std::to_string(L.rho().back()));
    }
    Field field{t0, std::vector<double>(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        field.values[i] = ansatz_z(r_of_y(grid.y(i), p), L);
    }
    return field;
}

using SnapshotObserver = std::function<void(const Field&)>;

/// Steps from field.t to t_target with the configured dt (the last step is shortened to land
/// on t_target). The observer sees the initial field, every `snapshot_every`-th step and the
/// final field.
inline Field evolve(Field field, double t_target, const SolverConfig& cfg, const Grid1D& grid,
                    const CatenoidParams& p, const SnapshotObserver& observer = {},
                    std::size_t snapshot_every = 1) {
    if (t_target < field.t) throw ArgumentError("evolve: backward integration is not supported");
    if (t_target == field.t) return field;
    if (snapshot_every == 0) throw ArgumentError("evolve: snapshot_every must be positive");
    ThetaStepper stepper(grid, p, cfg);
    const double t0 = field.t;
    const double span = t_target - t0;
    const auto steps = static_cast<std::size_t>(std::ceil(span / cfg.dt - 1e-9));
    if (observer) observer(field);
    for (std::size_t m = 1; m <= steps; ++m) {
        const double t_next = m == steps ? t_target : t0 + static_cast<double>(m) * cfg.dt;
        field = stepper.step(field, t_next - field.t);
        field.t = t_next;
        for (double v : field.values) {
            if (!(std::abs(v) <= cfg.envelope)) {
                throw BlowUpError("evolve: |v| exceeded " + std::to_string(cfg.envelope) +
                                      " at t = " + std::to_string(field.t),
                                  field.t);
            }
        }
        if (observer && (m % snapshot_every == 0 || m == steps)) observer(field);
    }
    return field;
}

}  // namespace catenoid_ac
