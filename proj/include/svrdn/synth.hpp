#pragma once

#include "svrdn/image.hpp"

#include <cstdint>
#include <vector>

namespace svrdn {

// Occlusion scenes: opaque shapes with power-law sizes (disks and elongated
// rotated bars), uniform gray levels, optional oriented texture, soft edges,
// and an acquisition-blur pass. This family reproduces the second-order
// statistics the pipeline relies on (1/f-like spectra, long oriented edges,
// heavy-tailed wavelet marginals, high neighbor correlation in the finest
// scale from the optical point-spread function).
struct SceneParams {
    double r_min = 4.0;
    double r_max = 90.0;
    double power = 2.2;       // p(r) ~ r^-power
    double gray_lo = 20.0;
    double gray_hi = 235.0;
    double bar_prob = 0.35;   // fraction of shapes drawn as elongated bars
    double texture_prob = 0.45;
    double texture_amp = 9.0;
    double edge_smooth = 0.8; // soft-edge width in pixels
    double blur_sigma = 2.4;  // Gaussian PSF applied to the composited scene
    // Fraction of corpus images rendered in focus (blur_sigma = 0), like the
    // crisp minority of a photo collection. Applies to synth_corpus only.
    double sharp_frac = 0.2;
};

Image synth_scene(int rows, int cols, std::uint64_t seed, const SceneParams& p = {});

// Deterministic corpus: seeds base_seed+1 … base_seed+count. Every
// ceil(1/sharp_frac)-th image is rendered in focus, the rest with the
// acquisition blur, approximating the focus mix of a real collection.
std::vector<Image> synth_corpus(int rows, int cols, int count, std::uint64_t base_seed,
                                const SceneParams& p = {});

// Fixed-parameter 256x256 test scenes. Variant 0 is busy and crisp like the
// classic photographic test images; variants 1 and 2 are calm, soft-edged
// frames in the spirit of infrared captures, where acquisition artifacts
// dominate the quality score.
Image test_scene(int variant);

} // namespace svrdn
