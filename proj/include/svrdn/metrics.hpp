#pragma once

#include "svrdn/image.hpp"
#include "svrdn/stats.hpp"

#include <string>

namespace svrdn {

double rmse(const Image& a, const Image& b);

// Mean local SSIM: 11x11 Gaussian window (std 1.5), K1=0.01, K2=0.03,
// dynamic range 255, window fully inside the image (no padding).
double ssim(const Image& a, const Image& b);

// Second-order residual summary under the shared pair-histogram convention.
struct ResidualReport {
    Hist2D hist;      // (pixel, right neighbor), 64 bins over [-64, 64]
    double variance = 0.0;
    double pair_corr = 0.0; // Pearson correlation of horizontal neighbors
};

ResidualReport residual_report(const Image& residual);

// Visualization copy with probabilities exponentiated to 0.25 (contrast
// stretch for near-empty bins). Never used in any KLD computation.
void write_residual_viz_csv(const ResidualReport& rep, const std::string& path);

} // namespace svrdn
