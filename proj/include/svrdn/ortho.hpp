#pragma once

#include "svrdn/image.hpp"

#include <string>
#include <vector>

namespace svrdn {

// Critically sampled orthonormal wavelet decomposition (Daubechies-4 pair,
// periodic extension). Used by the thresholding baselines, which want an
// orthonormal basis so that coefficient MSE equals pixel MSE.
//
// Level l (1 = finest) detail bands have dims/2^l; ll is the approximation
// at dims/2^n_levels. lh is low along rows / high along columns, hl the
// transpose, hh high in both.
struct OrthoPyramid {
    int n_levels = 0;
    std::vector<Grid> lh, hl, hh; // index l-1
    Grid ll;
};

// Band ids for threshold maps: "l{level}{lh|hl|hh}" and "ll".
std::string ortho_band_id(int level, const std::string& kind);
inline constexpr const char* kOrthoLowId = "ll";

// Image dims must be divisible by 2^n_levels.
OrthoPyramid ortho_forward(const Grid& img, int n_levels);
Grid ortho_inverse(const OrthoPyramid& pyr);

} // namespace svrdn
