#pragma once

#include "svrdn/image.hpp"
#include "svrdn/steerable.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace svrdn {

// Shared binning convention for all second-order (pixel, right-neighbor)
// histograms entering KLD scores: signal histograms span gray levels,
// residual histograms span a symmetric window with clipping at the edges.
inline constexpr int kPairBins = 64;
inline constexpr double kSignalLo = 0.0, kSignalHi = 255.0;
inline constexpr double kNoiseLo = -64.0, kNoiseHi = 64.0;

struct Hist1D {
    std::vector<double> edges; // n_bins + 1, uniform
    std::vector<double> prob;  // normalized
};

struct Hist2D {
    int n_bins = 0;
    std::vector<double> edges_x, edges_y; // n_bins + 1 each, uniform
    std::vector<double> prob;             // n_bins x n_bins row-major (x index major)

    double& p(int ix, int iy) { return prob[static_cast<size_t>(ix) * n_bins + iy]; }
    double p(int ix, int iy) const { return prob[static_cast<size_t>(ix) * n_bins + iy]; }
};

// Mutual information (bits) between a coefficient and its neighbors over a
// square window of integer offsets. values is (2*max_offset+1)^2 row-major;
// the center cell equals the band entropy. alpha tags the orientation angle
// of the band the map came from (used when fitting kernel widths).
struct MIMap {
    int max_offset = 2;
    double alpha = 0.0;
    std::vector<double> values;

    int side() const { return 2 * max_offset + 1; }
    double at(int dy, int dx) const {
        return values[static_cast<size_t>(dy + max_offset) * side() + (dx + max_offset)];
    }
    double& at(int dy, int dx) {
        return values[static_cast<size_t>(dy + max_offset) * side() + (dx + max_offset)];
    }
};

Hist1D hist1d(const std::vector<double>& xs, int n_bins, double lo, double hi);

// Out-of-range samples are clipped into the edge bins.
Hist2D hist2d(const std::vector<std::pair<double, double>>& pairs, int n_bins,
              double xlo, double xhi, double ylo, double yhi);

// Shannon entropy of a normalized pmf, in bits.
double entropy(const std::vector<double>& prob);

// Plug-in estimate, in bits. Requires a normalized histogram.
double mutual_info(const Hist2D& h);

// D_KL(p || q) in bits. Both histograms get `smooth` added per bin and are
// renormalized first, so empirical zero bins stay finite.
double kld(const Hist1D& p, const Hist1D& q, double smooth = 1e-8);
double kld(const Hist2D& p, const Hist2D& q, double smooth = 1e-8);

// Joint histogram of (v[r,c], v[r+dr,c+dc]) over all non-wrapping positions,
// both axes binned over [lo, hi].
Hist2D pair_hist(const Grid& g, int dr, int dc, int n_bins, double lo, double hi);
// Accumulate the same pairs into raw counts (pooling across grids).
void pair_accumulate(const Grid& g, int dr, int dc, int n_bins, double lo, double hi,
                     std::vector<double>& counts);
Hist2D counts_to_hist(const std::vector<double>& counts, int n_bins,
                      double lo, double hi);

// MI between coefficient and neighbor for every offset in [-2,2]^2, pooled
// over all supplied bands with a shared value range.
MIMap mi_map(const std::vector<Grid>& bands, int n_bins = 256, int max_offset = 2);

// MI-vs-distance curves for a natural corpus and a size-matched white noise
// corpus pushed through the same transform.
//   spatial:     neighbor at (0,d) within each finest-scale band, d = 1..4
//   orientation: same pixel, orientation index distance d = 1..K/2
//   scale:       finest coefficient vs ancestor at scale 1+d, d = 1..min(3,S-1)
struct MICurve {
    std::string kind;
    std::vector<int> distance;
    std::vector<double> natural;
    std::vector<double> iid;
};

MICurve mi_profiles(const std::vector<Image>& corpus, const std::string& kind,
                    const SteerableSpec& spec, int n_bins = 256,
                    std::uint64_t iid_seed = 101);

// CSV writers (edges row first for histograms; one row per offset for curves).
void write_hist2d_csv(const Hist2D& h, const std::string& path);
void write_mimap_csv(const MIMap& m, const std::string& path);
void write_curve_csv(const MICurve& c, const std::string& path);

// Fixed-precision float formatting used by every CSV artifact (6 significant
// digits, so reruns diff clean).
std::string fmt_num(double v);

} // namespace svrdn
