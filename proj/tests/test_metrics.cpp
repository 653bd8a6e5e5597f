#include "svrdn/metrics.hpp"
#include "svrdn/rng.hpp"

#include <catch2/catch.hpp>

#include <cmath>

using namespace svrdn;

namespace {

Image textured(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    Image img(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            img.at(r, c) = 128.0 + 50.0 * std::sin(0.25 * r) * std::cos(0.15 * c) +
                           15.0 * rng.gaussian();
    return img;
}

} // namespace

TEST_CASE("root mean square error closed forms") {
    Image a(2, 2), b(2, 2);
    a.v = {0.0, 0.0, 0.0, 0.0};
    b.v = {1.0, 2.0, 3.0, 6.0};
    REQUIRE(rmse(a, b) == Approx(std::sqrt(12.5)).margin(1e-12));
    REQUIRE(rmse(a, a) == 0.0);
    REQUIRE(rmse(a, b) == rmse(b, a));
}

TEST_CASE("rmse validates dimensions") {
    REQUIRE_THROWS_AS(rmse(Image(2, 2, 0.0), Image(2, 3, 0.0)), std::invalid_argument);
    REQUIRE_THROWS_AS(rmse(Image(0, 0), Image(0, 0)), std::invalid_argument);
}

TEST_CASE("similarity of an image with itself is one") {
    Image img = textured(64, 64, 7);
    REQUIRE(ssim(img, img) == Approx(1.0).margin(1e-12));
}

TEST_CASE("similarity is symmetric") {
    Image a = textured(64, 64, 9);
    Image b = textured(64, 64, 10);
    REQUIRE(ssim(a, b) == Approx(ssim(b, a)).margin(1e-12));
}

TEST_CASE("inverting the gray range drives similarity negative") {
    Image img = textured(64, 64, 11);
    Image inv(64, 64);
    for (size_t k = 0; k < img.v.size(); ++k) inv.v[k] = 255.0 - img.v[k];
    REQUIRE(ssim(img, inv) < 0.0);
}

TEST_CASE("similarity degrades monotonically with noise level") {
    Image img = textured(96, 96, 13);
    double prev = 1.0;
    for (double sigma : {5.0, 15.0, 35.0, 70.0}) {
        Rng rng(17);
        Image noisy = img;
        for (double& v : noisy.v) v += rng.gaussian(0.0, sigma);
        double s = ssim(img, noisy);
        REQUIRE(s < prev);
        prev = s;
    }
    REQUIRE(prev > -1.0);
}

TEST_CASE("similarity needs the full window") {
    REQUIRE_THROWS_AS(ssim(Image(8, 8, 1.0), Image(8, 8, 1.0)), std::invalid_argument);
}

TEST_CASE("residual report captures variance and neighbor correlation") {
    Rng rng(19);
    Image white(64, 64);
    for (double& v : white.v) v = rng.gaussian(0.0, 20.0);
    ResidualReport w = residual_report(white);
    REQUIRE(w.variance == Approx(400.0).epsilon(0.1));
    REQUIRE(std::abs(w.pair_corr) < 0.05);

    // Strongly row-smoothed noise correlates adjacent columns.
    Image smooth(64, 64);
    for (int r = 0; r < 64; ++r) {
        double prev = 0.0;
        for (int c = 0; c < 64; ++c) {
            prev = 0.9 * prev + rng.gaussian(0.0, 5.0);
            smooth.at(r, c) = prev;
        }
    }
    ResidualReport s = residual_report(smooth);
    REQUIRE(s.pair_corr > 0.5);
    REQUIRE(s.hist.n_bins == kPairBins);
}
