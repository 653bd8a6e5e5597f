#pragma once

#include "svrdn/fft.hpp"
#include "svrdn/image.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace svrdn {

struct SteerableSpec {
    int n_scales = 4;
    int n_orients = 8;
};

// Redundant oriented multi-scale decomposition.
//
// bands[s-1][o] is the oriented band at scale s (1-based, s=1 finest) and
// orientation o in [0, n_orients). Scale s bands have dims/2^(s-1); the
// residual lowpass has dims/2^n_scales. Scale-1 bands are kept at full
// resolution, so the finest scale is undecimated.
struct Pyramid {
    SteerableSpec spec;
    Grid highpass;
    std::vector<std::vector<Grid>> bands;
    Grid lowpass;
};

// Stable textual ids used in gain/threshold profiles and reports:
// "high", "s{scale}o{orient}", "low".
std::string band_id(int scale, int orient);
inline constexpr const char* kHighpassId = "high";
inline constexpr const char* kLowpassId = "low";

// Per-band noise amplification factors: the std of each band of unit-variance
// white noise pushed through the forward transform.
using GainProfile = std::map<std::string, double>;

// Reusable transform for one image size. Precomputes the frequency-domain
// masks and FFT plans once; forward/inverse are then const and cheap to call
// repeatedly. Construct instances serially (FFTW planner is global state).
class SteerableTransform {
public:
    SteerableTransform(int rows, int cols, const SteerableSpec& spec);

    Pyramid forward(const Grid& img) const;
    Grid inverse(const Pyramid& pyr) const;

    const SteerableSpec& spec() const { return spec_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

private:
    struct Level {
        int rows, cols;          // grid size where this scale's bands live
        std::vector<double> hi;  // radial highpass mask (shifted layout)
        std::vector<double> lo;  // radial lowpass mask
        std::vector<std::vector<double>> ang; // one signed angular mask per orientation
    };

    int rows_, cols_;
    SteerableSpec spec_;
    std::vector<double> hi0_, lo0_;   // outermost radial split at full size
    std::vector<Level> levels_;       // one per scale
    int lp_rows_ = 0, lp_cols_ = 0;   // residual lowpass size
    std::vector<std::unique_ptr<Fft2>> ffts_; // per distinct level size + lowpass

    const Fft2* fft_cached(int rows, int cols) const;
    const Fft2& fft_for(int rows, int cols) const;
};

// One-shot wrappers. Image dims must be divisible by 2^n_scales.
Pyramid steerable_forward(const Grid& img, const SteerableSpec& spec);
Grid steerable_inverse(const Pyramid& pyr);

// Monte-Carlo estimate of the per-band gains for unit-variance white noise.
// Deterministic for a fixed seed.
GainProfile noise_gain(int rows, int cols, const SteerableSpec& spec,
                       int n_trials = 20, std::uint64_t seed = 7);

// Directory layout: one little-endian float32 raw file per band plus
// manifest.json describing shapes and ordering.
void save_pyramid(const Pyramid& pyr, const std::string& dir);
Pyramid load_pyramid(const std::string& dir);

} // namespace svrdn
