#pragma once

#include <string>
#include <vector>

namespace svrdn {

// Row-major 2D grid of doubles. Used both for luminance images (nominal
// range [0,255]) and for wavelet subbands.
struct Grid {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Grid() = default;
    Grid(int r, int c, double fill = 0.0) : rows(r), cols(c), v(size_t(r) * c, fill) {}

    double& at(int r, int c) { return v[size_t(r) * cols + c]; }
    double at(int r, int c) const { return v[size_t(r) * cols + c]; }
    size_t size() const { return v.size(); }
    int width() const { return cols; }
    int height() const { return rows; }
};

using Image = Grid;

// One tile of a subband plus its origin in the source grid.
struct Patch {
    int r0 = 0;
    int c0 = 0;
    Grid block;
};

// Non-overlapping tiling of a grid. Patches exactly cover the source;
// trailing patches may be smaller when dims are not multiples of the
// patch size.
struct PatchGrid {
    std::vector<Patch> patches;
    int src_rows = 0;
    int src_cols = 0;
};

// 8-bit binary PGM (P5), maxval <= 255.
Image load_image(const std::string& path);

// Values are clipped to [0,255] and rounded half-up on write.
void save_image(const Image& img, const std::string& path);

PatchGrid tile(const Grid& grid, int patch_size = 16);
Grid untile(const PatchGrid& pg);

// All PGM files in `dir`, lexicographic by filename, truncated to `limit`.
std::vector<Image> load_corpus(const std::string& dir, size_t limit);

double clip255(double x);

} // namespace svrdn
