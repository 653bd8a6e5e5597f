#include "svrdn/kernel.hpp"

#include <catch2/catch.hpp>

#include <cmath>
#include <numbers>

using namespace svrdn;

namespace {

// Builds the 5x5 offset map the fitter consumes from an exact kernel shape.
MIMap model_map(double sigma1, double sigma2, double alpha, double amplitude = 1.0) {
    MIMap m;
    m.max_offset = 2;
    m.alpha = alpha;
    m.values.assign(25, 0.0);
    KernelSpec spec{sigma1, sigma2, alpha, false};
    for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx)
            m.at(dy, dx) = amplitude * kernel_value({dy, dx}, {0, 0}, spec);
    return m;
}

} // namespace

TEST_CASE("kernel value matches the closed form on the slow axis") {
    KernelSpec spec{4.8, 2.4, 0.0, false};
    // Offset of 4.8 rows along the slow axis: exp(-sqrt(4.8^2 / 4.8)).
    double expected = std::exp(-std::sqrt(4.8));
    // Positions are integers; use the metric directly through an offset the
    // widths divide exactly.
    KernelSpec unit{4.0, 2.0, 0.0, false};
    REQUIRE(kernel_value({4, 0}, {0, 0}, unit) == Approx(std::exp(-2.0)).margin(1e-12));
    REQUIRE(kernel_value({0, 2}, {0, 0}, unit) == Approx(std::exp(-std::sqrt(2.0))).margin(1e-12));
    REQUIRE(expected == Approx(0.1119).margin(5e-4));
    REQUIRE(kernel_value({0, 0}, {0, 0}, spec) == 1.0);
}

TEST_CASE("kernel decays slower along its oriented axis") {
    double pi = std::numbers::pi;
    for (double alpha : {0.0, pi / 8, pi / 4, pi / 2}) {
        KernelSpec spec{4.8, 1.2, alpha, false};
        // Points on the slow axis: (r, c) = t * (cos a, sin a).
        double along = kernel_value({static_cast<int>(std::round(4 * std::cos(alpha))),
                                     static_cast<int>(std::round(4 * std::sin(alpha)))},
                                    {0, 0}, spec);
        double across = kernel_value({static_cast<int>(std::round(-4 * std::sin(alpha))),
                                      static_cast<int>(std::round(4 * std::cos(alpha)))},
                                     {0, 0}, spec);
        REQUIRE(along > across);
    }
}

TEST_CASE("kernel is symmetric in its arguments and pi periodic in angle") {
    KernelSpec a{4.8, 2.4, 0.7, false};
    KernelSpec b = a;
    b.alpha = a.alpha + std::numbers::pi;
    for (int dy = -3; dy <= 3; ++dy)
        for (int dx = -3; dx <= 3; ++dx) {
            REQUIRE(kernel_value({dy, dx}, {0, 0}, a) ==
                    Approx(kernel_value({0, 0}, {dy, dx}, a)).margin(1e-14));
            REQUIRE(kernel_value({dy, dx}, {0, 0}, a) ==
                    Approx(kernel_value({dy, dx}, {0, 0}, b)).margin(1e-14));
        }
}

TEST_CASE("isotropic flag averages the two widths") {
    KernelSpec iso{4.0, 2.0, 0.0, true};
    // Both axes behave as sigma = 3.
    REQUIRE(kernel_value({3, 0}, {0, 0}, iso) ==
            Approx(kernel_value({0, 3}, {0, 0}, iso)).margin(1e-14));
    REQUIRE(kernel_value({3, 0}, {0, 0}, iso) == Approx(std::exp(-std::sqrt(3.0))).margin(1e-12));
}

TEST_CASE("gram matrix over a lattice is positive semidefinite") {
    std::vector<PixelPos> pos;
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c) pos.emplace_back(r, c);
    KernelSpec spec{4.8, 2.4, std::numbers::pi / 8, false};
    Eigen::MatrixXd K = kernel_matrix(pos, spec);
    REQUIRE(K.rows() == 256);
    REQUIRE(K.diagonal().minCoeff() == 1.0);
    REQUIRE(K.diagonal().maxCoeff() == 1.0);
    REQUIRE((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
    REQUIRE(es.eigenvalues().minCoeff() > -1e-10);
}

TEST_CASE("gram matrix rejects duplicate positions") {
    std::vector<PixelPos> pos = {{0, 0}, {1, 0}, {0, 0}};
    REQUIRE_THROWS_AS(kernel_matrix(pos, KernelSpec{}), std::invalid_argument);
}

TEST_CASE("width fitting recovers synthetic shapes") {
    for (auto [s1, s2, alpha] :
         {std::tuple{4.8, 2.4, 0.0}, {4.8, 2.4, std::numbers::pi / 4}, {3.0, 1.5, 0.0},
          {6.0, 2.0, std::numbers::pi / 2}}) {
        MIMap m = model_map(s1, s2, alpha, 2.5);
        auto [f1, f2] = fit_widths(m, false);
        REQUIRE(f1 == Approx(s1).margin(0.05));
        REQUIRE(f2 == Approx(s2).margin(0.05));
    }
}

TEST_CASE("width fitting with the ratio pinned halves the freedom") {
    MIMap m = model_map(4.8, 2.4, 0.0);
    auto [f1, f2] = fit_widths(m, true);
    REQUIRE(f1 == Approx(2.0 * f2).margin(1e-9));
    REQUIRE(f1 == Approx(4.8).margin(0.05));
}

TEST_CASE("width fitting on an isotropic map returns equal widths") {
    MIMap m;
    m.max_offset = 2;
    m.alpha = 0.0;
    m.values.assign(25, 0.0);
    KernelSpec iso{3.0, 3.0, 0.0, false};
    for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx) m.at(dy, dx) = kernel_value({dy, dx}, {0, 0}, iso);
    auto [f1, f2] = fit_widths(m, false);
    REQUIRE(f1 / f2 == Approx(1.0).margin(0.05));
}

TEST_CASE("width fitting rejects flat maps") {
    MIMap flat;
    flat.max_offset = 2;
    flat.values.assign(25, 3.7);
    REQUIRE_THROWS_AS(fit_widths(flat, false), std::invalid_argument);
}

TEST_CASE("kernel spec validation") {
    KernelSpec bad;
    bad.sigma1 = 0.0;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = KernelSpec{};
    bad.sigma2 = -1.0;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}
