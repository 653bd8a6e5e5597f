#pragma once

#include "svrdn/image.hpp"
#include "svrdn/stats.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace svrdn {

struct GaussianSpec {
    double var = 400.0;
};

struct StripingSpec {
    double col_frac = 0.04;
    double factor_lo = 0.8, factor_hi = 1.0;
    int group_min = 5, group_max = 10;
};

struct IrisSpec {
    double gauss_var = 50.0;
    double salt_pepper_frac = 0.0005;
    int patches_min = 2, patches_max = 4;
    int patch_px_min = 8, patch_px_max = 16;
    double interlace_gain = 0.9;
    bool enable_gauss = true, enable_salt_pepper = true;
    bool enable_patches = true, enable_interlace = true;
};

struct JpegSpec {
    double coarseness = 1.0;
};

struct J2kSpec {
    double delta = 10.0;
};

struct NoiseSpec {
    std::variant<GaussianSpec, StripingSpec, IrisSpec, JpegSpec, J2kSpec> variant;
    std::uint64_t seed = 1;

    std::string name() const; // gaussian / striping / iris / jpeg_like / j2k_like
};

// Returns (noisy, residual) with noisy - residual == img bit-exactly: every
// simulator snaps its output to a 2^-20 gray-level lattice so the additive
// bookkeeping is exact in double arithmetic.
std::pair<Image, Image> apply_noise(const Image& img, const NoiseSpec& spec);

Image vertical_striping(const Image& img, const StripingSpec& spec, std::uint64_t seed);
Image iris_noise(const Image& img, const IrisSpec& spec, std::uint64_t seed);
// Blockwise 8x8 DCT quantization against the standard luminance table scaled
// by `coarseness`; output clipped to [0,255]. Deterministic (no RNG).
Image jpeg_like(const Image& img, double coarseness);
// Orthogonal wavelet quantization with per-level steps delta*2^(l-1)
// (approximation band at the coarsest weight); clipped to [0,255].
Image j2k_like(const Image& img, double delta);

// Pooled residual pair-histogram over a corpus (shift (0,1), shared noise
// binning); the per-image seed is derived from spec.seed.
Hist2D noise_reference(const std::vector<Image>& corpus, const NoiseSpec& spec);

} // namespace svrdn
