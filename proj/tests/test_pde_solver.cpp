#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "catenoid_ac/catenoid_ac.hpp"
#include "manufactured.hpp"

using namespace catenoid_ac;

namespace {

Field sample(const Grid1D& grid, double t, auto fn) {
    Field field{t, std::vector<double>(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i) field.values[i] = fn(grid.y(i));
    return field;
}

// max interior error of the discrete operator against an analytic expression
double operator_error(const Grid1D& grid, const CatenoidParams& p, auto v, auto exact, std::size_t first) {
    const auto Lv = apply_spatial_operator(sample(grid, 0.0, v), grid, p);
    double err = 0.0;
    for (std::size_t i = first; i + 1 < grid.size(); ++i) err = std::max(err, std::abs(Lv[i] - exact(grid.y(i))));
    return err;
}

}  // namespace

TEST(SpatialOperator, AnnihilatesConstants) {
    for (int N : {2, 3, 5}) {
        const CatenoidParams p(N);
        const Grid1D grid(30.0, 301);
        const auto Lv = apply_spatial_operator(sample(grid, 0.0, [](double) { return -0.7; }), grid, p);
        for (double x : Lv) EXPECT_EQ(x, 0.0);
    }
}

TEST(SpatialOperator, QuadraticMatchesExpandedForm) {
    const CatenoidParams p(2);
    auto v = [](double y) { return y * y; };
    auto exact = [](double y) { return 2.0 + y * 2.0 * y / (1.0 + y * y); };
    const double e1 = operator_error(Grid1D(5.0, 101), p, v, exact, 0);
    const double e2 = operator_error(Grid1D(5.0, 201), p, v, exact, 0);
    EXPECT_LT(e1, 1e-2);
    EXPECT_NEAR(e1 / e2, 4.0, 0.5);
}

TEST(SpatialOperator, SecondOrderOnSine) {
    for (int N : {2, 3}) {
        const CatenoidParams p(N);
        const manufactured::Solution sol{N, 1.0, 0.0};
        auto v = [](double y) { return std::sin(y); };
        const double m = N - 1.0;
        auto exact = [&](double y) {
            const double s = 1 + y * y;
            return m * m * std::pow(s, (N - 2.0) / m) * -std::sin(y) +
                   m * (2.0 * N - 3.0) * y * std::pow(s, -1.0 / m) * std::cos(y);
        };
        // sin is odd, so the reflected row at the neck is excluded
        const double e1 = operator_error(Grid1D(6.0, 121), p, v, exact, 1);
        const double e2 = operator_error(Grid1D(6.0, 241), p, v, exact, 1);
        EXPECT_NEAR(e1 / e2, 4.0, 0.5) << "N=" << N;
        // cos is even, so the neck row is included
        auto c = [](double y) { return std::cos(y); };
        auto exact_c = [&](double y) { return sol.operator_exact(0.0, y); };
        const double c1 = operator_error(Grid1D(6.0, 121), p, c, exact_c, 0);
        const double c2 = operator_error(Grid1D(6.0, 241), p, c, exact_c, 0);
        EXPECT_NEAR(c1 / c2, 4.0, 0.5) << "N=" << N;
    }
}

TEST(SpatialOperator, SizeValidation) {
    const Grid1D grid(5.0, 11);
    EXPECT_THROW(apply_spatial_operator(Field{0.0, std::vector<double>(10)}, grid, CatenoidParams(2)), ArgumentError);
}

TEST(Step, EquilibriumMinusOneIsFixed) {
    const CatenoidParams p(2);
    const Grid1D grid(80.0, 4001);
    SolverConfig cfg;
    cfg.dt = default_time_step(grid);
    cfg.far_field = FarField::fixed(-1.0);
    ThetaStepper stepper(grid, p, cfg);
    Field field{0.0, std::vector<double>(grid.size(), -1.0)};
    for (int s = 0; s < 1000; ++s) field = stepper.step(field, cfg.dt);
    for (double v : field.values) EXPECT_LT(std::abs(v + 1.0), 1e-12);
}

TEST(Step, PureDiffusionConservesWeightedMass) {
    for (int N : {2, 3}) {
        const CatenoidParams p(N);
        const Grid1D grid(60.0, 1201);
        SolverConfig cfg;
        cfg.reaction = Reaction::none;
        cfg.far_field = FarField::fixed(0.0);
        cfg.dt = 0.01;
        auto mass = [&](const Field& f) {
            // trapezoid weights with a(y), half weight at the neck
            double m = 0.0;
            for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
                const double wgt = i == 0 ? 0.5 : 1.0;
                m += wgt * f.values[i] * divergence_form_coeffs(grid.y(i), p).a * grid.spacing();
            }
            return m;
        };
        const Field start = sample(grid, 0.0, [](double y) { return std::exp(-(y - 5.0) * (y - 5.0)); });
        // short run: for N = 3 the diffusivity grows like 4y and would reach the boundary
        const Field end = evolve(start, 0.25, cfg, grid, p);
        EXPECT_GT(std::abs(end.values[100] - start.values[100]), 1e-2);
        EXPECT_NEAR(mass(end) / mass(start), 1.0, 1e-12) << "N=" << N;
    }
}

TEST(Step, ZeroEquilibriumStaysZero) {
    const CatenoidParams p(2);
    const Grid1D grid(20.0, 401);
    SolverConfig cfg;
    cfg.far_field = FarField::fixed(0.0);
    cfg.dt = 0.05;
    const Field end = evolve(Field{0.0, std::vector<double>(grid.size(), 0.0)}, 5.0, cfg, grid, p);
    for (double v : end.values) EXPECT_EQ(v, 0.0);
}

TEST(Step, TemporalOrderCrankNicolson) {
    for (int N : {2, 3}) {
        const auto orders = manufactured::observed_orders(manufactured::temporal_errors(N));
        for (double q : orders) EXPECT_GE(q, 1.9) << "N=" << N;
        EXPECT_LT(orders.back(), 2.2) << "N=" << N;
    }
}

TEST(Step, BackwardEulerAndExplicitReactionAreFirstOrder) {
    const auto be = manufactured::observed_orders(manufactured::temporal_errors(2, 1.0));
    EXPECT_NEAR(be.back(), 1.0, 0.2);
    const auto ee = manufactured::observed_orders(manufactured::temporal_errors(2, 0.5, Reaction::explicit_euler));
    EXPECT_NEAR(ee.back(), 1.0, 0.2);
}

TEST(Step, SpatialOrderOnManufacturedSolution) {
    for (int N : {2, 3}) {
        const auto orders = manufactured::observed_orders(manufactured::spatial_errors(N));
        for (double q : orders) EXPECT_GE(q, 1.9) << "N=" << N;
    }
}

TEST(Step, ConfigValidation) {
    SolverConfig cfg;
    cfg.theta = 0.3;
    EXPECT_THROW(cfg.validate(), ArgumentError);
    cfg.theta = 0.5;
    cfg.dt = 0.0;
    EXPECT_THROW(cfg.validate(), ArgumentError);
    EXPECT_THROW(FarField::tracking({}), ArgumentError);
}

TEST(InitializeFromAnsatz, SingleLayerZeroAtLayer) {
    const CatenoidParams p(2);
    const double rho = 50.0;
    const Grid1D grid(y_of_r(rho + 15.0, p), 2001);
    const Field field = initialize_from_ansatz(grid, -1250.0, LayerState({rho}), p);
    const double y0 = y_of_r(rho, p);
    const auto i = static_cast<std::size_t>(std::lround(y0 / grid.spacing()));
    EXPECT_LT(std::abs(field.values[i]), w1(0.0) * grid.spacing());
}

TEST(InitializeFromAnsatz, TailsMatchParity) {
    for (int N : {2, 3}) {
        const CatenoidParams p(N);
        const std::vector<double> rho{20.0, 26.0};
        const Grid1D grid(y_of_r(rho.back() + 15.0, p), 3001);
        const Field field = initialize_from_ansatz(grid, -100.0, LayerState(rho), p);
        EXPECT_NEAR(field.values.front(), -1.0, 2.0 * std::exp(-kSqrt2 * (rho[0] - 1.0)));
        const double gap = r_of_y(grid.y_max(), p) - rho.back();
        EXPECT_NEAR(field.values.back(), LayerState(rho).far_field_value(), 2.0 * std::exp(-kSqrt2 * gap));
    }
}

TEST(InitializeFromAnsatz, RejectsShortDomain) {
    const CatenoidParams p(2);
    const Grid1D grid(y_of_r(55.0, p), 1001);
    EXPECT_THROW(initialize_from_ansatz(grid, -1250.0, LayerState({50.0}), p), ConfigurationError);
}

TEST(Evolve, IdentityBackwardAndObserver) {
    const CatenoidParams p(2);
    const Grid1D grid(20.0, 201);
    SolverConfig cfg;
    cfg.dt = 0.1;
    const Field start{-3.0, std::vector<double>(grid.size(), -1.0)};
    const Field same = evolve(start, -3.0, cfg, grid, p);
    EXPECT_EQ(same.values, start.values);
    EXPECT_EQ(same.t, -3.0);
    EXPECT_THROW(evolve(start, -4.0, cfg, grid, p), ArgumentError);
    std::vector<double> seen;
    const Field end = evolve(start, -1.95, cfg, grid, p, [&](const Field& f) { seen.push_back(f.t); }, 4);
    EXPECT_EQ(end.t, -1.95);
    // start, steps 4 and 8, final step 11
    ASSERT_EQ(seen.size(), 4u);
    EXPECT_EQ(seen.front(), -3.0);
    EXPECT_EQ(seen.back(), -1.95);
}

TEST(Evolve, EnvelopeViolationThrows) {
    const CatenoidParams p(2);
    const Grid1D grid(20.0, 201);
    SolverConfig cfg;
    cfg.dt = 0.1;
    cfg.far_field = FarField::fixed(3.0);
    try {
        evolve(Field{0.0, std::vector<double>(grid.size(), 0.0)}, 1.0, cfg, grid, p);
        FAIL() << "expected BlowUpError";
    } catch (const BlowUpError& e) {
        EXPECT_NEAR(e.time(), 0.1, 1e-12);
    }
}

TEST(Evolve, SingleLayerFollowsCurvatureLaw) {
    // interface drift over [-2000, -1900] against rho' = -1/rho
    const CatenoidParams p(2);
    const double t0 = -2000.0, t1 = -1900.0;
    const double rho0 = std::sqrt(-2.0 * t0);
    const Grid1D grid(y_of_r(rho0 + 15.0, p), 4001);
    SolverConfig cfg;
    cfg.dt = default_time_step(grid);
    cfg.far_field = FarField::fixed(1.0);
    const Field start = initialize_from_ansatz(grid, t0, LayerState({rho0}), p);
    const Field end = evolve(start, t1, cfg, grid, p);
    const double moved = extract_interfaces(end, grid, p, 1)[0] - extract_interfaces(start, grid, p, 1)[0];
    const double predicted = std::sqrt(-2.0 * t1) - rho0;
    EXPECT_NEAR(moved / predicted, 1.0, 0.1);
}
