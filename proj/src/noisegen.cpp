#include "svrdn/noisegen.hpp"

#include "svrdn/ortho.hpp"
#include "svrdn/rng.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace svrdn {

namespace {

// Snap to multiples of 2^-20: with 8-bit image values both img + r and
// noisy - r are then exact in doubles, which the additivity contract needs.
double snap(double x) { return std::round(x * 1048576.0) / 1048576.0; }

void snap_all(Image& img) {
    for (double& v : img.v) v = snap(v);
}

Image gaussian_noisy(const Image& img, const GaussianSpec& spec, std::uint64_t seed) {
    if (spec.var < 0.0) throw std::invalid_argument("gaussian noise: negative variance");
    Rng rng(seed);
    double sd = std::sqrt(spec.var);
    Image out = img;
    for (double& v : out.v) v += snap(rng.gaussian(0.0, sd));
    return out;
}

// ITU T.81 Annex K luminance quantization table.
constexpr std::array<int, 64> kJpegLumTable = {
    16, 11, 10, 16, 24,  40,  51,  61,  //
    12, 12, 14, 19, 26,  58,  60,  55,  //
    14, 13, 16, 24, 40,  57,  69,  56,  //
    14, 17, 22, 29, 51,  87,  80,  62,  //
    18, 22, 37, 56, 68,  109, 103, 77,  //
    24, 35, 55, 64, 81,  104, 113, 92,  //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99};

struct Dct8 {
    // Orthonormal DCT-II basis: row k is the k-th basis vector.
    std::array<std::array<double, 8>, 8> b;

    Dct8() {
        for (int k = 0; k < 8; ++k) {
            double s = (k == 0) ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
            for (int n = 0; n < 8; ++n)
                b[k][n] = s * std::cos(std::numbers::pi * (2 * n + 1) * k / 16.0);
        }
    }
};

} // namespace

std::string NoiseSpec::name() const {
    switch (variant.index()) {
        case 0: return "gaussian";
        case 1: return "striping";
        case 2: return "iris";
        case 3: return "jpeg_like";
        default: return "j2k_like";
    }
}

Image vertical_striping(const Image& img, const StripingSpec& spec, std::uint64_t seed) {
    if (img.cols < 10) throw std::invalid_argument("vertical_striping: image too narrow");
    if (spec.col_frac < 0.0 || spec.col_frac > 1.0)
        throw std::invalid_argument("vertical_striping: col_frac outside [0,1]");
    if (spec.group_min < 1 || spec.group_max < spec.group_min)
        throw std::invalid_argument("vertical_striping: bad group bounds");

    Rng rng(seed);
    int n_cols = static_cast<int>(std::lround(spec.col_frac * img.cols));
    Image out = img;
    if (n_cols == 0) return out;

    // Split the column budget into group lengths within [group_min, group_max],
    // stealing from the draw when the remainder would drop below group_min.
    std::vector<int> lengths;
    int rem = n_cols;
    while (rem > 0) {
        int len;
        if (rem <= spec.group_max) {
            len = rem;
        } else {
            len = rng.uniform_int(spec.group_min, spec.group_max);
            if (rem - len < spec.group_min) len = rem - spec.group_min;
        }
        lengths.push_back(len);
        rem -= len;
    }

    // Place groups left to right without overlap or adjacency.
    std::vector<std::pair<int, int>> placed; // [start, end)
    for (int len : lengths) {
        bool ok = false;
        for (int attempt = 0; attempt < 10000 && !ok; ++attempt) {
            int start = rng.uniform_int(0, img.cols - len);
            ok = true;
            for (const auto& [s, e] : placed)
                if (start < e + 1 && s < start + len + 1) {
                    ok = false;
                    break;
                }
            if (ok) placed.emplace_back(start, start + len);
        }
        if (!ok) throw std::runtime_error("vertical_striping: could not place groups");
    }

    for (const auto& [s, e] : placed) {
        double factor = rng.uniform(spec.factor_lo, spec.factor_hi);
        for (int c = s; c < e; ++c)
            for (int r = 0; r < img.rows; ++r) out.at(r, c) = snap(out.at(r, c) * factor);
    }
    return out;
}

Image iris_noise(const Image& img, const IrisSpec& spec, std::uint64_t seed) {
    if (img.rows < 32 || img.cols < 32)
        throw std::invalid_argument("iris_noise: image smaller than 32x32");
    Rng rng(seed);
    Image out = img;

    if (spec.enable_gauss) {
        double sd = std::sqrt(spec.gauss_var);
        for (double& v : out.v) v += rng.gaussian(0.0, sd);
    }
    if (spec.enable_salt_pepper) {
        size_t n = out.v.size();
        auto count = static_cast<size_t>(std::lround(spec.salt_pepper_frac * n));
        std::vector<char> hit(n, 0);
        size_t placed = 0;
        while (placed < count) {
            size_t k = static_cast<size_t>(rng.uniform_int(0, static_cast<int>(n) - 1));
            if (hit[k]) continue;
            hit[k] = 1;
            out.v[k] = rng.uniform() < 0.5 ? 0.0 : 255.0;
            ++placed;
        }
    }
    if (spec.enable_patches) {
        int k = rng.uniform_int(spec.patches_min, spec.patches_max);
        for (int p = 0; p < k; ++p) {
            int h = rng.uniform_int(spec.patch_px_min, spec.patch_px_max);
            int w = rng.uniform_int(spec.patch_px_min, spec.patch_px_max);
            int r0 = rng.uniform_int(0, img.rows - h);
            int c0 = rng.uniform_int(0, img.cols - w);
            for (int r = r0; r < r0 + h; ++r)
                for (int c = c0; c < c0 + w; ++c) out.at(r, c) = 0.0;
        }
    }
    if (spec.enable_interlace) {
        for (int r = 1; r < img.rows; r += 2)
            for (int c = 0; c < img.cols; ++c) out.at(r, c) *= spec.interlace_gain;
    }
    snap_all(out);
    return out;
}

Image jpeg_like(const Image& img, double coarseness) {
    if (coarseness < 0.0) throw std::invalid_argument("jpeg_like: negative coarseness");
    if (img.rows % 8 != 0 || img.cols % 8 != 0)
        throw std::invalid_argument("jpeg_like: dims must be divisible by 8");

    static const Dct8 dct;
    Image out(img.rows, img.cols);
    std::array<double, 64> blk{}, tmp{};
    for (int br = 0; br < img.rows; br += 8)
        for (int bc = 0; bc < img.cols; bc += 8) {
            for (int r = 0; r < 8; ++r)
                for (int c = 0; c < 8; ++c) blk[r * 8 + c] = img.at(br + r, bc + c) - 128.0;
            // rows then columns
            for (int r = 0; r < 8; ++r)
                for (int k = 0; k < 8; ++k) {
                    double s = 0.0;
                    for (int n = 0; n < 8; ++n) s += dct.b[k][n] * blk[r * 8 + n];
                    tmp[r * 8 + k] = s;
                }
            for (int c = 0; c < 8; ++c)
                for (int k = 0; k < 8; ++k) {
                    double s = 0.0;
                    for (int n = 0; n < 8; ++n) s += dct.b[k][n] * tmp[n * 8 + c];
                    blk[k * 8 + c] = s;
                }
            if (coarseness > 0.0)
                for (int i = 0; i < 64; ++i) {
                    double q = kJpegLumTable[i] * coarseness;
                    blk[i] = std::round(blk[i] / q) * q;
                }
            // inverse: transpose applications
            for (int c = 0; c < 8; ++c)
                for (int n = 0; n < 8; ++n) {
                    double s = 0.0;
                    for (int k = 0; k < 8; ++k) s += dct.b[k][n] * blk[k * 8 + c];
                    tmp[n * 8 + c] = s;
                }
            for (int r = 0; r < 8; ++r)
                for (int n = 0; n < 8; ++n) {
                    double s = 0.0;
                    for (int k = 0; k < 8; ++k) s += dct.b[k][n] * tmp[r * 8 + k];
                    out.at(br + r, bc + n) = snap(clip255(s + 128.0));
                }
        }
    return out;
}

Image j2k_like(const Image& img, double delta) {
    if (delta < 0.0) throw std::invalid_argument("j2k_like: negative delta");
    const int levels = 4;
    OrthoPyramid pyr = ortho_forward(img, levels);
    if (delta > 0.0) {
        auto quant = [](Grid& g, double step) {
            for (double& v : g.v) v = std::round(v / step) * step;
        };
        for (int l = 1; l <= levels; ++l) {
            double step = delta * std::pow(2.0, l - 1);
            quant(pyr.lh[l - 1], step);
            quant(pyr.hl[l - 1], step);
            quant(pyr.hh[l - 1], step);
        }
        quant(pyr.ll, delta * std::pow(2.0, levels - 1));
    }
    Image out = ortho_inverse(pyr);
    for (double& v : out.v) v = snap(clip255(v));
    return out;
}

std::pair<Image, Image> apply_noise(const Image& img, const NoiseSpec& spec) {
    Image noisy = std::visit(
        [&](const auto& s) -> Image {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianSpec>)
                return gaussian_noisy(img, s, spec.seed);
            else if constexpr (std::is_same_v<T, StripingSpec>)
                return vertical_striping(img, s, spec.seed);
            else if constexpr (std::is_same_v<T, IrisSpec>)
                return iris_noise(img, s, spec.seed);
            else if constexpr (std::is_same_v<T, JpegSpec>)
                return jpeg_like(img, s.coarseness);
            else
                return j2k_like(img, s.delta);
        },
        spec.variant);
    Image residual(img.rows, img.cols);
    for (size_t k = 0; k < residual.v.size(); ++k) residual.v[k] = noisy.v[k] - img.v[k];
    return {std::move(noisy), std::move(residual)};
}

Hist2D noise_reference(const std::vector<Image>& corpus, const NoiseSpec& spec) {
    if (corpus.size() < 10) throw std::invalid_argument("noise_reference: corpus too small");
    std::vector<double> counts(static_cast<size_t>(kPairBins) * kPairBins, 0.0);
    for (size_t i = 0; i < corpus.size(); ++i) {
        NoiseSpec per = spec;
        per.seed = spec.seed + 1000003 * (i + 1);
        auto [noisy, residual] = apply_noise(corpus[i], per);
        pair_accumulate(residual, 0, 1, kPairBins, kNoiseLo, kNoiseHi, counts);
    }
    return counts_to_hist(counts, kPairBins, kNoiseLo, kNoiseHi);
}

} // namespace svrdn
