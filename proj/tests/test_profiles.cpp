#include <cmath>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "catenoid_ac/profiles.hpp"

using namespace catenoid_ac;
using boost::multiprecision::cpp_bin_float_50;

namespace {

double tanh_oracle(double x) {
    cpp_bin_float_50 X(x);
    return static_cast<double>(tanh(X / sqrt(cpp_bin_float_50(2))));
}

}  // namespace

TEST(Heteroclinic, ExampleValues) {
    EXPECT_EQ(w(0.0), 0.0);
    EXPECT_NEAR(w1(0.0), 1.0 / std::sqrt(2.0), 1e-16);
    EXPECT_NEAR(w(1.0), tanh_oracle(1.0), 1e-16);
    EXPECT_NEAR(w(1.0), 0.6088594, 1e-7);
}

TEST(Heteroclinic, AgreesWithMultiprecisionAcrossRange) {
    for (double x : {-40.0, -7.5, -1.0, -1e-6, 1e-6, 0.3, 2.0, 12.0, 400.0}) {
        EXPECT_NEAR(w(x), tanh_oracle(x), 2e-16) << x;
    }
}

TEST(Heteroclinic, ComplementsAreAccurateInTails) {
    for (double x : {5.0, 20.0, 30.0, 200.0}) {
        // 1 - tanh u = 2e^{-2u}/(1 + e^{-2u}) and sech^2 u = 4e^{-2u}/(1 + e^{-2u})^2 in 50 digits
        const cpp_bin_float_50 e = exp(-sqrt(cpp_bin_float_50(2)) * x);
        const double ref = static_cast<double>(2 * e / (1 + e));
        EXPECT_NEAR(one_minus_w(x) / ref, 1.0, 1e-13) << x;
        EXPECT_NEAR(one_plus_w(-x) / ref, 1.0, 1e-13) << x;
        const double sech2 = static_cast<double>(4 * e / ((1 + e) * (1 + e)));
        EXPECT_NEAR(one_minus_w_squared(x) / sech2, 1.0, 1e-13) << x;
    }
}

TEST(Heteroclinic, DerivativesMatchFiniteDifferences) {
    for (double x : {-3.0, -0.4, 0.0, 0.7, 2.5}) {
        const double h = 1e-4;
        auto d = [h](auto fn, double s) { return (fn(s + h) - fn(s - h)) / (2 * h); };
        EXPECT_NEAR(w1(x), d([](double s) { return w(s); }, x), 1e-8);
        EXPECT_NEAR(w2(x), d([](double s) { return w1(s); }, x), 1e-8);
        EXPECT_NEAR(w3(x), d([](double s) { return w2(s); }, x), 1e-8);
    }
}

TEST(Heteroclinic, SolvesProfileEquation) {
    // w'' + f(w) = 0
    for (double x : {-5.0, -1.0, 0.0, 0.5, 3.0}) EXPECT_NEAR(w2(x) + f(w(x)), 0.0, 1e-15);
}

TEST(Heteroclinic, ExponentialTailConstant) {
    for (double x : {20.0, 50.0}) EXPECT_NEAR(w1(x) * std::exp(kSqrt2 * x), 2.0 * kSqrt2, 1e-10);
}

TEST(Nonlinearity, ExampleValues) {
    EXPECT_EQ(f(0.0), 0.0);
    EXPECT_EQ(f(1.0), 0.0);
    EXPECT_EQ(f(-1.0), 0.0);
    EXPECT_EQ(fprime(1.0), -2.0);
    EXPECT_EQ(fprime(-1.0), -2.0);
    // interior maximum where f'(v) = 0
    const double v = 1.0 / std::sqrt(3.0);
    EXPECT_NEAR(fprime(v), 0.0, 1e-15);
    EXPECT_NEAR(f(v), 2.0 / (3.0 * std::sqrt(3.0)), 1e-15);
    EXPECT_NEAR(f(v), 0.3849002, 1e-7);
}

TEST(Nonlinearity, FOfWUsesComplements) {
    for (double x : {-25.0, -3.0, 0.2, 4.0, 25.0}) {
        cpp_bin_float_50 W = tanh(cpp_bin_float_50(x) / sqrt(cpp_bin_float_50(2)));
        const double ref = static_cast<double>(W * (1 - W * W));
        EXPECT_NEAR(f_of_w(x) / ref, 1.0, 1e-13) << x;
    }
}

TEST(NonlinearRemainder, ExampleValues) {
    EXPECT_EQ(nonlinear_remainder(0.0, 0.7), 0.0);
    EXPECT_NEAR(nonlinear_remainder(0.1, 0.0), -0.001, 1e-17);
}

TEST(NonlinearRemainder, QuadraticSmallnessAndDefinition) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const double psi = u(rng), z = u(rng);
        const double n = nonlinear_remainder(psi, z);
        EXPECT_LE(std::abs(n), (3 * std::abs(z) + std::abs(psi)) * psi * psi * (1 + 1e-14));
        EXPECT_NEAR(n, f(z + psi) - f(z) - fprime(z) * psi, 1e-12);
    }
}

TEST(LayerState, Validation) {
    EXPECT_THROW(LayerState({}), ArgumentError);
    EXPECT_THROW(LayerState({0.5}), StateError);
    EXPECT_THROW(LayerState({5.0, 5.0}), StateError);
    EXPECT_THROW(LayerState({5.0, 4.0}), StateError);
    const LayerState L({3.0, 8.0});
    EXPECT_EQ(L.k(), 2);
    EXPECT_EQ(L.parity_constant(), -1.0);
    EXPECT_EQ(LayerState({3.0}).parity_constant(), 0.0);
    EXPECT_EQ(LayerState({3.0, 5.0, 9.0}).parity_constant(), 0.0);
    EXPECT_EQ(LayerState({3.0, 5.0, 9.0, 11.0}).parity_constant(), -1.0);
}

TEST(Ansatz, ExampleValues) {
    EXPECT_EQ(ansatz_z(50.0, LayerState({50.0})), 0.0);
    const LayerState L2({30.0, 40.0});
    EXPECT_NEAR(ansatz_z(10.0, L2), -1.0, 2e-12);
    const LayerState L({10.0, 15.0});
    EXPECT_NEAR(ansatz_z(10.0, L), -w(-5.0) - 1.0, 1e-16);
    EXPECT_NEAR(ansatz_z(10.0, L), -0.0016972, 1e-7);
}

TEST(Ansatz, FarFieldMatchesParity) {
    for (int k = 1; k <= 5; ++k) {
        std::vector<double> rho;
        for (int j = 0; j < k; ++j) rho.push_back(20.0 + 10.0 * j);
        const LayerState L(rho);
        EXPECT_NEAR(ansatz_z(rho.back() + 60.0, L), L.far_field_value(), 1e-14) << k;
        EXPECT_NEAR(ansatz_z(1.0, L), -1.0, 1e-10) << k;
    }
}

TEST(Weight, Validation) {
    auto rho0 = [](double) { return std::vector<double>{10.0, 20.0}; };
    EXPECT_THROW(WeightSpec(0.0, rho0), ArgumentError);
    EXPECT_THROW(WeightSpec(kSqrt2, rho0), ArgumentError);
    const WeightSpec spec(1.0, rho0);
    EXPECT_TRUE(spec.admissible_for_reduction());
    EXPECT_FALSE(WeightSpec(0.5, rho0).admissible_for_reduction());
    EXPECT_NEAR(spec.nu(), (kSqrt2 - 1.0) / (2 * kSqrt2), 1e-16);
    EXPECT_THROW(weight_phi(-1.0, 1.0, spec), DomainError);
}

TEST(Weight, BranchFormulas) {
    const std::vector<double> rho{12.0, 19.0};
    const double sigma = 1.0;
    const WeightSpec spec(sigma, [&](double) { return rho; });
    EXPECT_NEAR(weight_phi(-1.0, rho[0], spec), std::exp(sigma * (rho[0] - rho[1])), 1e-16);
    EXPECT_NEAR(weight_phi(-1.0, rho[1], spec), std::exp(sigma * (rho[0] - rho[1])), 1e-16);
    // three layers: the middle branch has two exponentials
    const std::vector<double> rho3{10.0, 16.0, 23.0};
    const double r = 17.0;
    EXPECT_NEAR(weight_phi(r, rho3, 0.8), std::exp(0.8 * (10.0 - r)) + std::exp(0.8 * (r - 23.0)), 1e-16);
    EXPECT_EQ(weight_phi(37.0, std::vector<double>{5.0}, 1.0), 1.0);
}

TEST(Weight, BranchComparabilityAtMidpoints) {
    // left and right branch formulas agree up to a factor 2 at each midpoint
    for (const auto& rho : {std::vector<double>{140.0, 146.0}, std::vector<double>{14.0, 19.0, 24.5, 30.0}}) {
        const double sigma = 1.0;
        for (std::size_t j = 0; j + 1 < rho.size(); ++j) {
            const double mid = 0.5 * (rho[j] + rho[j + 1]);
            const double below = weight_phi(mid, rho, sigma);
            const double above = weight_phi(std::nextafter(mid, 1e9), rho, sigma);
            EXPECT_GE(above / below, 0.5);
            EXPECT_LE(above / below, 2.0);
        }
    }
}

TEST(Weight, WeightedNormSemantics) {
    const std::vector<double> rho{12.0, 19.0};
    const double sigma = 1.0;
    std::vector<double> radii, zeros, phi, mixed;
    for (int i = 0; i <= 300; ++i) radii.push_back(1.0 + 0.1 * i);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        zeros.push_back(0.0);
        phi.push_back(weight_phi(radii[i], rho, sigma));
        mixed.push_back(phi.back() * (i % 2 == 0 ? 2.0 : 1.0));
    }
    EXPECT_EQ(weighted_norm(zeros, radii, rho, sigma), 0.0);
    EXPECT_NEAR(weighted_norm(phi, radii, rho, sigma), 1.0, 1e-12);
    EXPECT_NEAR(weighted_norm(mixed, radii, rho, sigma), 2.0, 1e-12);
    EXPECT_THROW(weighted_norm(std::vector<double>{}, std::vector<double>{}, rho, sigma), ArgumentError);
}

TEST(Weight, LogSpaceAvoidsUnderflow) {
    const std::vector<double> rho{100.0, 900.0};
    // Phi ~ e^{-800} underflows but the ratio stays finite
    const double lp = log_weight_phi(100.0, rho, 1.0);
    EXPECT_NEAR(lp, -800.0, 1e-12);
    EXPECT_NEAR(ratio_to_weight(std::exp(-700.0), lp), std::exp(100.0), 1e-12 * std::exp(100.0));
}
