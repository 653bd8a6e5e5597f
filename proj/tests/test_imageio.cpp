#include "svrdn/image.hpp"
#include "svrdn/rng.hpp"

#include <catch2/catch.hpp>

#include <filesystem>
#include <fstream>
#include <set>

using namespace svrdn;
namespace fs = std::filesystem;

TEST_CASE("pgm round trip preserves integer gray levels") {
    Image img(7, 5);
    Rng rng(3);
    for (double& v : img.v) v = rng.uniform_int(0, 255);
    auto path = fs::temp_directory_path() / "svrdn_io_test.pgm";
    save_image(img, path.string());
    Image back = load_image(path.string());
    REQUIRE(back.rows == 7);
    REQUIRE(back.cols == 5);
    REQUIRE(back.v == img.v);
    fs::remove(path);
}

TEST_CASE("saving clips and rounds to the gray range") {
    Image img(1, 4);
    img.v = {-20.0, 300.0, 127.4, 127.5};
    auto path = fs::temp_directory_path() / "svrdn_io_clip.pgm";
    save_image(img, path.string());
    Image back = load_image(path.string());
    REQUIRE(back.v == std::vector<double>{0.0, 255.0, 127.0, 128.0});
    fs::remove(path);
}

TEST_CASE("loading rejects missing and malformed files") {
    REQUIRE_THROWS(load_image("/nonexistent/image.pgm"));
    auto path = fs::temp_directory_path() / "svrdn_io_bad.pgm";
    std::ofstream(path.string()) << "P5\n3 3\n255\nab"; // truncated pixels
    REQUIRE_THROWS(load_image(path.string()));
    fs::remove(path);
}

TEST_CASE("tiling covers the grid exactly once") {
    Grid g(40, 33);
    for (size_t k = 0; k < g.v.size(); ++k) g.v[k] = static_cast<double>(k);
    PatchGrid pg = tile(g, 16);
    size_t covered = 0;
    for (const Patch& p : pg.patches) covered += p.block.v.size();
    REQUIRE(covered == g.v.size());
    Grid back = untile(pg);
    REQUIRE(back.v == g.v);

    // Trailing patches shrink: 40 = 16+16+8 rows, 33 = 16+16+1 columns,
    // ceil(40/16) * ceil(33/16) = 9 patches.
    REQUIRE(pg.patches.size() == 9);
    std::set<int> row_sizes, col_sizes;
    for (const Patch& p : pg.patches) {
        row_sizes.insert(p.block.rows);
        col_sizes.insert(p.block.cols);
    }
    REQUIRE(row_sizes == std::set<int>{8, 16});
    REQUIRE(col_sizes == std::set<int>{1, 16});
}

TEST_CASE("grids smaller than the patch size become one patch") {
    Grid g(9, 11, 4.0);
    PatchGrid pg = tile(g, 16);
    REQUIRE(pg.patches.size() == 1);
    REQUIRE(pg.patches[0].block.rows == 9);
    REQUIRE(pg.patches[0].block.cols == 11);
}

TEST_CASE("corpus loading is sorted and capped") {
    auto dir = fs::temp_directory_path() / "svrdn_corpus_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    for (int i = 0; i < 5; ++i) {
        Image img(4, 4, static_cast<double>(i));
        char name[16];
        std::snprintf(name, sizeof(name), "img_%02d.pgm", i);
        save_image(img, (dir / name).string());
    }
    std::vector<Image> corpus = load_corpus(dir.string(), 3);
    REQUIRE(corpus.size() == 3);
    REQUIRE(corpus[0].v[0] == 0.0);
    REQUIRE(corpus[2].v[0] == 2.0);
    fs::remove_all(dir);
}
