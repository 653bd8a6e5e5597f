#include "svrdn/rng.hpp"
#include "svrdn/stats.hpp"

#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

using namespace svrdn;

namespace {

std::vector<std::pair<double, double>> diagonal_pairs(int n_values, int reps) {
    std::vector<std::pair<double, double>> pairs;
    for (int r = 0; r < reps; ++r)
        for (int i = 0; i < n_values; ++i) {
            double x = (i + 0.5) / n_values;
            pairs.emplace_back(x, x);
        }
    return pairs;
}

} // namespace

TEST_CASE("perfectly dependent two level variable carries one bit") {
    Hist2D h = hist2d(diagonal_pairs(2, 50), 2, 0.0, 1.0, 0.0, 1.0);
    REQUIRE(mutual_info(h) == Approx(1.0).margin(1e-12));
}

TEST_CASE("identity map over 256 levels carries eight bits") {
    Hist2D h = hist2d(diagonal_pairs(256, 4), 256, 0.0, 1.0, 0.0, 1.0);
    REQUIRE(mutual_info(h) == Approx(8.0).margin(1e-12));
}

TEST_CASE("independent uniform pairs carry no information") {
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) pairs.emplace_back((i + 0.5) / 4, (j + 0.5) / 4);
    Hist2D h = hist2d(pairs, 4, 0.0, 1.0, 0.0, 1.0);
    REQUIRE(mutual_info(h) == Approx(0.0).margin(1e-12));
}

TEST_CASE("mutual information is symmetric and bounded by marginal entropy") {
    Rng rng(5);
    std::vector<std::pair<double, double>> pairs, swapped;
    for (int i = 0; i < 5000; ++i) {
        double x = rng.gaussian();
        double y = 0.7 * x + 0.3 * rng.gaussian();
        pairs.emplace_back(x, y);
        swapped.emplace_back(y, x);
    }
    Hist2D hxy = hist2d(pairs, 32, -4.0, 4.0, -4.0, 4.0);
    Hist2D hyx = hist2d(swapped, 32, -4.0, 4.0, -4.0, 4.0);
    double mi = mutual_info(hxy);
    REQUIRE(mi == Approx(mutual_info(hyx)).margin(1e-12));
    REQUIRE(mi > 0.1);

    std::vector<double> marginal(32, 0.0);
    for (int ix = 0; ix < 32; ++ix)
        for (int iy = 0; iy < 32; ++iy) marginal[ix] += hxy.p(ix, iy);
    double hx = 0.0;
    for (double p : marginal)
        if (p > 0.0) hx -= p * std::log2(p);
    REQUIRE(mi <= hx + 1e-12);
}

TEST_CASE("out of range samples are clipped into edge bins") {
    std::vector<std::pair<double, double>> pairs = {{-10.0, -10.0}, {10.0, 10.0}, {0.5, 0.5}};
    Hist2D h = hist2d(pairs, 2, 0.0, 1.0, 0.0, 1.0);
    REQUIRE(h.p(0, 0) == Approx(1.0 / 3.0));
    REQUIRE(h.p(1, 1) == Approx(2.0 / 3.0));
}

TEST_CASE("hist2d rejects empty input and bad ranges") {
    REQUIRE_THROWS_AS(hist2d({}, 4, 0.0, 1.0, 0.0, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(hist2d(diagonal_pairs(2, 1), 0, 0.0, 1.0, 0.0, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(hist2d(diagonal_pairs(2, 1), 4, 1.0, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("divergence of a point mass from a fair coin is one bit") {
    Hist2D pm = counts_to_hist({1.0, 0.0, 0.0, 0.0}, 2, 0.0, 1.0);
    Hist2D fair = counts_to_hist({0.5, 0.5, 0.0, 0.0}, 2, 0.0, 1.0);
    REQUIRE(kld(pm, fair, 0.0) == Approx(1.0).margin(1e-12));
    REQUIRE(std::isinf(kld(fair, pm, 0.0)));
}

TEST_CASE("divergence is asymmetric and zero only at equality") {
    Hist2D a = counts_to_hist({0.7, 0.1, 0.1, 0.1}, 2, 0.0, 1.0);
    Hist2D b = counts_to_hist({0.25, 0.25, 0.25, 0.25}, 2, 0.0, 1.0);
    REQUIRE(kld(a, a) == Approx(0.0).margin(1e-9));
    REQUIRE(kld(a, b) > 0.0);
    REQUIRE(kld(a, b) != Approx(kld(b, a)).margin(1e-6));
}

TEST_CASE("divergence requires matching binning") {
    Hist2D a = counts_to_hist({1.0, 0.0, 0.0, 0.0}, 2, 0.0, 1.0);
    Hist2D b = counts_to_hist(std::vector<double>(16, 1.0), 4, 0.0, 1.0);
    REQUIRE_THROWS_AS(kld(a, b), std::invalid_argument);
    Hist2D c = counts_to_hist({1.0, 0.0, 0.0, 0.0}, 2, 0.0, 2.0);
    REQUIRE_THROWS_AS(kld(a, c), std::invalid_argument);
}

TEST_CASE("pair histogram counts every horizontal neighbor pair") {
    // A 256x256 image has 256*255 horizontally adjacent pairs; a constant
    // gradient along columns puts each pair at (v, v+1).
    Grid g(16, 16);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c) g.at(r, c) = c;
    Hist2D h = pair_hist(g, 0, 1, 16, 0.0, 16.0);
    double mass_above = 0.0;
    for (int i = 0; i + 1 < 16; ++i) mass_above += h.p(i, i + 1);
    REQUIRE(mass_above == Approx(1.0).margin(1e-12));
}

TEST_CASE("checkerboard corner pairs land in opposite corners") {
    Grid g(8, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) g.at(r, c) = ((r + c) % 2) ? 255.0 : 0.0;
    Hist2D h = pair_hist(g, 0, 1, 2, 0.0, 255.0);
    REQUIRE(h.p(0, 1) == Approx(0.5).margin(1e-12));
    REQUIRE(h.p(1, 0) == Approx(0.5).margin(1e-12));
    REQUIRE(h.p(0, 0) == Approx(0.0).margin(1e-12));
    REQUIRE(mutual_info(h) == Approx(1.0).margin(1e-12));
}

TEST_CASE("map of mutual information peaks at the center cell") {
    Rng rng(9);
    std::vector<Grid> bands;
    for (int i = 0; i < 6; ++i) {
        Grid g(48, 48);
        double prev = 0.0;
        for (double& v : g.v) {
            prev = 0.9 * prev + rng.gaussian();
            v = prev;
        }
        bands.push_back(std::move(g));
    }
    MIMap m = mi_map(bands, 64, 2);
    REQUIRE(m.side() == 5);
    REQUIRE(m.at(0, 0) >= m.at(0, 1));
    REQUIRE(m.at(0, 1) > m.at(0, 2));
    // Correlation runs along the scan direction here.
    REQUIRE(m.at(0, 1) > m.at(1, 0));
    // Symmetric offsets measure the same dependence.
    REQUIRE(m.at(0, 1) == Approx(m.at(0, -1)).margin(1e-12));
}

TEST_CASE("map of mutual information validates its input") {
    REQUIRE_THROWS_AS(mi_map({}, 64, 2), std::invalid_argument);
    std::vector<Grid> tiny = {Grid(3, 3, 1.0)};
    REQUIRE_THROWS_AS(mi_map(tiny, 64, 2), std::invalid_argument);
    std::vector<Grid> flat = {Grid(32, 32, 1.0), Grid(32, 32, 1.0)};
    REQUIRE_THROWS_AS(mi_map(flat, 64, 2), std::invalid_argument);
}

TEST_CASE("profiles separate structured images from white noise") {
    // Smooth random blobs through the pyramid: neighbor MI must exceed the
    // size-matched white noise baseline at short range.
    Rng rng(13);
    std::vector<Image> corpus;
    for (int i = 0; i < 12; ++i) {
        Image img(32, 32);
        for (int r = 0; r < 32; ++r)
            for (int c = 0; c < 32; ++c)
                img.at(r, c) = 128.0 + 55.0 * std::sin(0.3 * r + i) * std::cos(0.2 * c) +
                               8.0 * rng.gaussian();
        corpus.push_back(std::move(img));
    }
    SteerableSpec spec{2, 4};
    MICurve sp = mi_profiles(corpus, "spatial", spec, 64);
    REQUIRE(sp.kind == "spatial");
    REQUIRE(sp.distance == std::vector<int>{1, 2, 3, 4});
    REQUIRE(sp.natural[0] > sp.iid[0]);
    REQUIRE(sp.natural[0] > sp.natural[3]);

    MICurve orient = mi_profiles(corpus, "orientation", spec, 64);
    REQUIRE(orient.distance == std::vector<int>{1, 2});
    REQUIRE(orient.natural[0] > orient.iid[0]);

    MICurve sc = mi_profiles(corpus, "scale", spec, 64);
    REQUIRE(sc.distance == std::vector<int>{1});
    REQUIRE(sc.natural[0] > sc.iid[0]);

    REQUIRE_THROWS_AS(mi_profiles(corpus, "radial", spec, 64), std::invalid_argument);
    REQUIRE_THROWS_AS(mi_profiles({corpus[0]}, "spatial", spec, 64), std::invalid_argument);
}

TEST_CASE("numbers format at six significant digits") {
    REQUIRE(fmt_num(0.4637219) == "0.463722");
    REQUIRE(fmt_num(12.0) == "12");
    REQUIRE(fmt_num(123456.7) == "123457");
    REQUIRE(fmt_num(-0.5) == "-0.5");
}
