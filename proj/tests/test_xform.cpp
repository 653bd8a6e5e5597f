#include "svrdn/ortho.hpp"
#include "svrdn/rng.hpp"
#include "svrdn/steerable.hpp"

#include <catch2/catch.hpp>

#include <cmath>
#include <filesystem>

using namespace svrdn;

namespace {

Image random_image(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    Image img(rows, cols);
    for (double& v : img.v) v = rng.uniform(0.0, 255.0);
    return img;
}

double rel_rms(const Image& a, const Image& b) {
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < a.v.size(); ++k) {
        double d = a.v[k] - b.v[k];
        num += d * d;
        den += a.v[k] * a.v[k];
    }
    return std::sqrt(num / den);
}

double total_energy(const Grid& g) {
    double e = 0.0;
    for (double v : g.v) e += v * v;
    return e;
}

} // namespace

TEST_CASE("steerable round trip is numerically exact") {
    SteerableSpec spec;
    for (auto [rows, cols] : {std::pair{64, 64}, {64, 96}, {128, 128}}) {
        SteerableTransform xf(rows, cols, spec);
        Image img = random_image(rows, cols, 11 + rows + cols);
        Pyramid pyr = xf.forward(img);
        Image back = xf.inverse(pyr);
        REQUIRE(rel_rms(img, back) < 1e-10);
    }
}

TEST_CASE("steerable band inventory and dims") {
    SteerableSpec spec;
    SteerableTransform xf(128, 128, spec);
    Pyramid pyr = xf.forward(random_image(128, 128, 3));
    REQUIRE(pyr.bands.size() == 4);
    for (const auto& scale : pyr.bands) REQUIRE(scale.size() == 8);
    REQUIRE(pyr.highpass.rows == 128);
    REQUIRE(pyr.bands[0][0].rows == 128);
    REQUIRE(pyr.bands[1][0].rows == 64);
    REQUIRE(pyr.bands[2][0].rows == 32);
    REQUIRE(pyr.bands[3][0].rows == 16);
    REQUIRE(pyr.lowpass.rows == 8);
    REQUIRE(pyr.lowpass.cols == 8);
}

TEST_CASE("steerable lowpass carries the image mean") {
    SteerableTransform xf(64, 64, {});
    Image flat(64, 64, 77.0);
    Pyramid pyr = xf.forward(flat);
    double lp_mean = 0.0;
    for (double v : pyr.lowpass.v) lp_mean += v;
    lp_mean /= pyr.lowpass.size();
    REQUIRE(lp_mean == Approx(77.0).margin(1e-9));
    for (double v : pyr.highpass.v) REQUIRE(std::abs(v) < 1e-9);
    for (const auto& scale : pyr.bands)
        for (const Grid& b : scale)
            for (double v : b.v) REQUIRE(std::abs(v) < 1e-9);
}

TEST_CASE("steerable rejects sizes not divisible by 2^scales") {
    REQUIRE_THROWS_AS(SteerableTransform(100, 100, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(SteerableTransform(64, 100, {}), std::invalid_argument);
}

TEST_CASE("steerable finest scale is shift covariant") {
    // The finest oriented bands are not decimated, so shifting the input
    // cyclically shifts the coefficients.
    SteerableSpec spec;
    SteerableTransform xf(64, 64, spec);
    Image img = random_image(64, 64, 21);
    Image shifted(64, 64);
    int dy = 5, dx = 9;
    for (int r = 0; r < 64; ++r)
        for (int c = 0; c < 64; ++c)
            shifted.at(r, c) = img.at((r + dy) % 64, (c + dx) % 64);
    Pyramid a = xf.forward(img);
    Pyramid b = xf.forward(shifted);
    for (int o = 0; o < spec.n_orients; ++o)
        for (int r = 0; r < 64; ++r)
            for (int c = 0; c < 64; ++c)
                REQUIRE(b.bands[0][o].at(r, c) ==
                        Approx(a.bands[0][o].at((r + dy) % 64, (c + dx) % 64)).margin(1e-9));
}

TEST_CASE("steerable oriented band responds to its own orientation") {
    // A horizontal-frequency wave (vertical stripes) lands in band 0.
    SteerableSpec spec;
    SteerableTransform xf(64, 64, spec);
    Image waves(64, 64);
    for (int r = 0; r < 64; ++r)
        for (int c = 0; c < 64; ++c)
            waves.at(r, c) = 128.0 + 60.0 * std::cos(2.0 * std::acos(-1.0) * 10.0 * c / 64.0);
    Pyramid pyr = xf.forward(waves);
    double e0 = total_energy(pyr.bands[0][0]);
    double eperp = total_energy(pyr.bands[0][spec.n_orients / 2]);
    REQUIRE(e0 > 100.0 * eperp);
}

TEST_CASE("steerable save and load round trip") {
    SteerableTransform xf(64, 64, {});
    Image img = random_image(64, 64, 31);
    Pyramid pyr = xf.forward(img);
    auto dir = std::filesystem::temp_directory_path() / "svrdn_pyr_test";
    std::filesystem::remove_all(dir);
    save_pyramid(pyr, dir.string());
    Pyramid back = load_pyramid(dir.string());
    REQUIRE(back.spec.n_scales == pyr.spec.n_scales);
    // float32 storage bounds the round-trip error
    for (size_t k = 0; k < pyr.highpass.v.size(); ++k)
        REQUIRE(back.highpass.v[k] == Approx(pyr.highpass.v[k]).margin(1e-4));
    for (int s = 1; s <= 4; ++s)
        for (int o = 0; o < 8; ++o)
            for (size_t k = 0; k < pyr.bands[s - 1][o].v.size(); ++k)
                REQUIRE(back.bands[s - 1][o].v[k] ==
                        Approx(pyr.bands[s - 1][o].v[k]).margin(1e-3));
    std::filesystem::remove_all(dir);
}

TEST_CASE("noise gain is deterministic and scale ordered") {
    GainProfile g1 = noise_gain(64, 64, {}, 8, 7);
    GainProfile g2 = noise_gain(64, 64, {}, 8, 7);
    REQUIRE(g1 == g2);
    REQUIRE(g1.count("high") == 1);
    REQUIRE(g1.count("s1o0") == 1);
    REQUIRE(g1.count("s4o7") == 1);
    for (const auto& [id, g] : g1) REQUIRE(g > 0.0);
    // Unit-variance white noise keeps per-band responses on the order of 1.
    REQUIRE(g1.at("s1o0") > 0.05);
    REQUIRE(g1.at("s1o0") < 2.0);
}

TEST_CASE("ortho round trip preserves signal and energy") {
    for (auto [rows, cols] : {std::pair{64, 64}, {128, 96}}) {
        Image img = random_image(rows, cols, 41 + rows);
        OrthoPyramid pyr = ortho_forward(img, 4);
        Image back = ortho_inverse(pyr);
        REQUIRE(rel_rms(img, back) < 1e-11);

        double e_bands = total_energy(pyr.ll);
        for (int l = 1; l <= 4; ++l)
            e_bands += total_energy(pyr.lh[l - 1]) + total_energy(pyr.hl[l - 1]) +
                       total_energy(pyr.hh[l - 1]);
        REQUIRE(e_bands == Approx(total_energy(img)).epsilon(1e-10));
    }
}

TEST_CASE("ortho band dims halve per level") {
    OrthoPyramid pyr = ortho_forward(Image(64, 64, 1.0), 3);
    REQUIRE(pyr.lh[0].rows == 32);
    REQUIRE(pyr.lh[1].rows == 16);
    REQUIRE(pyr.lh[2].rows == 8);
    REQUIRE(pyr.ll.rows == 8);
    REQUIRE(ortho_band_id(2, "hh") == "l2hh");
}

TEST_CASE("ortho rejects non divisible sizes") {
    REQUIRE_THROWS_AS(ortho_forward(Image(60, 64, 0.0), 4), std::invalid_argument);
}
