#include "svrdn/image.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace svrdn {

double clip255(double x) {
    return std::min(255.0, std::max(0.0, x));
}

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(char(ch));
    }
    return tok;
}

} // namespace

Image load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_image: cannot open file: " + path);

    std::string magic = next_token(in);
    if (magic == "P2")
        throw std::runtime_error("load_image: unsupported format (ASCII P2): " + path);
    if (magic != "P5")
        throw std::runtime_error("load_image: unsupported format (expected P5): " + path);

    std::string ws = next_token(in);
    std::string hs = next_token(in);
    std::string ms = next_token(in);
    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(ws);
        h = std::stoi(hs);
        maxval = std::stoi(ms);
    } catch (...) {
        throw std::runtime_error("load_image: malformed header: " + path);
    }
    if (w <= 0 || h <= 0) throw std::runtime_error("load_image: malformed header: " + path);
    if (maxval <= 0 || maxval > 255)
        throw std::runtime_error("load_image: unsupported bit depth (maxval " +
                                 std::to_string(maxval) + "): " + path);

    std::vector<unsigned char> buf(size_t(w) * h);
    in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
    if (size_t(in.gcount()) != buf.size())
        throw std::runtime_error("load_image: malformed payload (truncated): " + path);

    Image img(h, w);
    for (size_t i = 0; i < buf.size(); ++i) img.v[i] = double(buf[i]);
    return img;
}

void save_image(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_image: cannot open for writing: " + path);
    out << "P5\n" << img.cols << " " << img.rows << "\n255\n";
    std::vector<unsigned char> buf(img.size());
    for (size_t i = 0; i < img.size(); ++i) {
        double q = std::floor(clip255(img.v[i]) + 0.5);
        buf[i] = static_cast<unsigned char>(std::min(255.0, q));
    }
    out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
    if (!out) throw std::runtime_error("save_image: write failed: " + path);
}

PatchGrid tile(const Grid& grid, int patch_size) {
    if (grid.rows < 1 || grid.cols < 1) throw std::invalid_argument("tile: empty grid");
    if (patch_size < 1) throw std::invalid_argument("tile: patch_size must be positive");

    PatchGrid pg;
    pg.src_rows = grid.rows;
    pg.src_cols = grid.cols;
    for (int r0 = 0; r0 < grid.rows; r0 += patch_size) {
        int ph = std::min(patch_size, grid.rows - r0);
        for (int c0 = 0; c0 < grid.cols; c0 += patch_size) {
            int pw = std::min(patch_size, grid.cols - c0);
            Patch p;
            p.r0 = r0;
            p.c0 = c0;
            p.block = Grid(ph, pw);
            for (int r = 0; r < ph; ++r)
                for (int c = 0; c < pw; ++c) p.block.at(r, c) = grid.at(r0 + r, c0 + c);
            pg.patches.push_back(std::move(p));
        }
    }
    return pg;
}

Grid untile(const PatchGrid& pg) {
    Grid out(pg.src_rows, pg.src_cols);
    std::vector<char> covered(out.size(), 0);
    for (const Patch& p : pg.patches) {
        if (p.r0 < 0 || p.c0 < 0 || p.r0 + p.block.rows > out.rows ||
            p.c0 + p.block.cols > out.cols)
            throw std::invalid_argument("untile: patch exceeds source dims");
        for (int r = 0; r < p.block.rows; ++r)
            for (int c = 0; c < p.block.cols; ++c) {
                size_t idx = size_t(p.r0 + r) * out.cols + (p.c0 + c);
                if (covered[idx]) throw std::invalid_argument("untile: overlapping patches");
                covered[idx] = 1;
                out.v[idx] = p.block.at(r, c);
            }
    }
    for (char c : covered)
        if (!c) throw std::invalid_argument("untile: patches do not cover the grid");
    return out;
}

std::vector<Image> load_corpus(const std::string& dir, size_t limit) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw std::runtime_error("load_corpus: not a directory: " + dir);
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".pgm")
            names.push_back(e.path().string());
    }
    std::sort(names.begin(), names.end());
    if (names.empty()) throw std::runtime_error("load_corpus: no PGM files in " + dir);
    if (names.size() > limit) names.resize(limit);
    std::vector<Image> out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(load_image(n));
    return out;
}

} // namespace svrdn
