#pragma once

#include "svrdn/stats.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace svrdn {

// Anisotropic exponential-decay kernel over integer pixel positions.
// alpha is the band orientation angle; at alpha = 0 the slow (sigma1) decay
// axis runs along rows. The widths enter the metric linearly, so sigma1 is
// in squared-pixel-per-pixel units rather than a literal length.
struct KernelSpec {
    double sigma1 = 4.8;
    double sigma2 = 2.4;
    double alpha = 0.0;
    bool isotropic = false; // both axes at mean(sigma1, sigma2)

    void validate() const;
};

using PixelPos = std::pair<int, int>; // (row, col)

// exp(-sqrt(u1^2/sigma1 + u2^2/sigma2)) with u = G(alpha) * (p_i - p_j).
double kernel_value(const PixelPos& p_i, const PixelPos& p_j, const KernelSpec& spec);

// Gram matrix over distinct positions: unit diagonal, symmetric, entries in
// (0,1]. Positive semidefiniteness is verified for n <= 256 (the patch sizes
// this project ever builds); violations throw.
Eigen::MatrixXd kernel_matrix(const std::vector<PixelPos>& positions, const KernelSpec& spec);

// Least-squares fit of the kernel shape (rotated by mimap.alpha) to an MI
// map normalized to 1 at its center. Returns (sigma1, sigma2), sigma1 >=
// sigma2. With constrain_ratio, sigma1 = 2*sigma2 is enforced.
std::pair<double, double> fit_widths(const MIMap& mimap, bool constrain_ratio);

} // namespace svrdn
