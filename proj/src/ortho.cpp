#include "svrdn/ortho.hpp"

#include <array>
#include <stdexcept>

namespace svrdn {

namespace {

// Daubechies-4 analysis lowpass (8 taps). Sum is sqrt(2), energy 1,
// shifts by even lags are orthogonal.
constexpr std::array<double, 8> kH = {
    0.230377813308896451,  0.714846570552915339,  0.630880767929859143,
    -0.0279837694168596877, -0.187034811719093003, 0.0308413818355606252,
    0.0328830116668851619, -0.0105974017850690178};

constexpr int kTaps = 8;

double g_tap(int k) { return (k % 2 == 0 ? 1.0 : -1.0) * kH[kTaps - 1 - k]; }

// One periodic analysis step along a strided 1D signal of length n:
// lo[m] = sum_k h[k] x[(2m+k) mod n], hi likewise with the mirrored taps.
void analyze1d(const double* x, int n, int stride, double* lo, double* hi, int out_stride) {
    int half = n / 2;
    for (int m = 0; m < half; ++m) {
        double a = 0.0, d = 0.0;
        for (int k = 0; k < kTaps; ++k) {
            double v = x[static_cast<size_t>((2 * m + k) % n) * stride];
            a += kH[k] * v;
            d += g_tap(k) * v;
        }
        lo[static_cast<size_t>(m) * out_stride] = a;
        hi[static_cast<size_t>(m) * out_stride] = d;
    }
}

// Adjoint of analyze1d, which is the inverse for an orthonormal pair.
void synth1d(const double* lo, const double* hi, int in_stride, double* x, int n, int stride) {
    int half = n / 2;
    for (int m = 0; m < n; ++m) x[static_cast<size_t>(m) * stride] = 0.0;
    for (int m = 0; m < half; ++m) {
        double a = lo[static_cast<size_t>(m) * in_stride];
        double d = hi[static_cast<size_t>(m) * in_stride];
        for (int k = 0; k < kTaps; ++k)
            x[static_cast<size_t>((2 * m + k) % n) * stride] += kH[k] * a + g_tap(k) * d;
    }
}

// One 2D level: rows first, then columns, in place on a working grid.
void analyze2d(const Grid& in, Grid& ll, Grid& lh, Grid& hl, Grid& hh) {
    int r = in.rows, c = in.cols, hr = r / 2, hc = c / 2;
    Grid tmp(r, c); // [rowlow | rowhigh]
    for (int i = 0; i < r; ++i)
        analyze1d(&in.v[static_cast<size_t>(i) * c], c, 1,
                  &tmp.v[static_cast<size_t>(i) * c], &tmp.v[static_cast<size_t>(i) * c + hc], 1);
    ll = Grid(hr, hc);
    lh = Grid(hr, hc);
    hl = Grid(hr, hc);
    hh = Grid(hr, hc);
    for (int j = 0; j < hc; ++j) {
        analyze1d(&tmp.v[j], r, c, &ll.v[j], &lh.v[j], hc);
        analyze1d(&tmp.v[hc + j], r, c, &hl.v[j], &hh.v[j], hc);
    }
}

void synth2d(const Grid& ll, const Grid& lh, const Grid& hl, const Grid& hh, Grid& out) {
    int hr = ll.rows, hc = ll.cols, r = 2 * hr, c = 2 * hc;
    Grid tmp(r, c);
    for (int j = 0; j < hc; ++j) {
        synth1d(&ll.v[j], &lh.v[j], hc, &tmp.v[j], r, c);
        synth1d(&hl.v[j], &hh.v[j], hc, &tmp.v[hc + j], r, c);
    }
    out = Grid(r, c);
    for (int i = 0; i < r; ++i)
        synth1d(&tmp.v[static_cast<size_t>(i) * c], &tmp.v[static_cast<size_t>(i) * c + hc], 1,
                &out.v[static_cast<size_t>(i) * c], c, 1);
}

} // namespace

std::string ortho_band_id(int level, const std::string& kind) {
    return "l" + std::to_string(level) + kind;
}

OrthoPyramid ortho_forward(const Grid& img, int n_levels) {
    if (n_levels < 1) throw std::invalid_argument("ortho: n_levels must be >= 1");
    int div = 1 << n_levels;
    if (img.rows <= 0 || img.cols <= 0 || img.rows % div != 0 || img.cols % div != 0)
        throw std::invalid_argument("ortho: image dims must be divisible by 2^n_levels");

    OrthoPyramid pyr;
    pyr.n_levels = n_levels;
    Grid cur = img;
    for (int l = 1; l <= n_levels; ++l) {
        Grid ll, lh, hl, hh;
        analyze2d(cur, ll, lh, hl, hh);
        pyr.lh.push_back(std::move(lh));
        pyr.hl.push_back(std::move(hl));
        pyr.hh.push_back(std::move(hh));
        cur = std::move(ll);
    }
    pyr.ll = std::move(cur);
    return pyr;
}

Grid ortho_inverse(const OrthoPyramid& pyr) {
    if (pyr.n_levels < 1 || static_cast<int>(pyr.lh.size()) != pyr.n_levels ||
        static_cast<int>(pyr.hl.size()) != pyr.n_levels ||
        static_cast<int>(pyr.hh.size()) != pyr.n_levels)
        throw std::invalid_argument("ortho: malformed pyramid");
    Grid cur = pyr.ll;
    for (int l = pyr.n_levels; l >= 1; --l) {
        const Grid& lh = pyr.lh[l - 1];
        if (lh.rows != cur.rows || lh.cols != cur.cols)
            throw std::invalid_argument("ortho: malformed pyramid");
        Grid up;
        synth2d(cur, lh, pyr.hl[l - 1], pyr.hh[l - 1], up);
        cur = std::move(up);
    }
    return cur;
}

} // namespace svrdn
