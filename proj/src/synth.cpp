#include "svrdn/synth.hpp"

#include "svrdn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace svrdn {

namespace {

constexpr double kPi = std::numbers::pi;

double sample_radius(Rng& rng, const SceneParams& p) {
    // Inverse CDF of r^-power on [r_min, r_max] (power != 1).
    double a = 1.0 - p.power;
    double lo = std::pow(p.r_min, a), hi = std::pow(p.r_max, a);
    return std::pow(lo + rng.uniform() * (hi - lo), 1.0 / a);
}

struct Shape {
    bool bar;
    double cx, cy;
    double r;            // disk radius or bar half-length
    double half_w;       // bar half-width
    double ca, sa;       // bar orientation
    double gray;
    bool textured;
    double tex_freq, tex_angle, tex_phase, tex_amp;

    // Coverage in [0,1] with a soft edge.
    double alpha(double x, double y, double smooth) const {
        double d;
        if (!bar) {
            d = std::hypot(x - cx, y - cy) - r;
        } else {
            double u = (x - cx) * ca + (y - cy) * sa;
            double v = -(x - cx) * sa + (y - cy) * ca;
            double qx = std::abs(u) - r, qy = std::abs(v) - half_w;
            double ox = std::max(qx, 0.0), oy = std::max(qy, 0.0);
            d = std::hypot(ox, oy) + std::min(std::max(qx, qy), 0.0);
        }
        return std::clamp(0.5 - d / smooth, 0.0, 1.0);
    }

    double color(double x, double y) const {
        if (!textured) return gray;
        double u = x * std::cos(tex_angle) + y * std::sin(tex_angle);
        return gray + tex_amp * std::sin(2.0 * kPi * tex_freq * u + tex_phase);
    }
};

void gaussian_blur(Image& img, double sigma) {
    int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> w(2 * radius + 1);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        w[k + radius] = std::exp(-0.5 * k * k / (sigma * sigma));
        sum += w[k + radius];
    }
    for (double& x : w) x /= sum;

    Image tmp(img.rows, img.cols);
    auto clampi = [](int i, int n) { return std::clamp(i, 0, n - 1); };
    for (int r = 0; r < img.rows; ++r)
        for (int c = 0; c < img.cols; ++c) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += w[k + radius] * img.at(r, clampi(c + k, img.cols));
            tmp.at(r, c) = acc;
        }
    for (int r = 0; r < img.rows; ++r)
        for (int c = 0; c < img.cols; ++c) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += w[k + radius] * tmp.at(clampi(r + k, img.rows), c);
            img.at(r, c) = acc;
        }
}

} // namespace

Image synth_scene(int rows, int cols, std::uint64_t seed, const SceneParams& p) {
    if (rows < 8 || cols < 8) throw std::invalid_argument("synth_scene: image too small");
    if (!(p.r_max >= p.r_min) || p.r_min <= 0.0)
        throw std::invalid_argument("synth_scene: bad radius range");

    Rng rng(seed);
    Image img(rows, cols, 0.0);
    std::vector<double> trans(img.v.size(), 1.0); // remaining transmittance
    size_t open = img.v.size();                   // pixels with trans >= cutoff
    const double cutoff = 1e-3;

    int max_shapes = 40 * std::max(rows, cols);
    for (int sh = 0; sh < max_shapes && open > 0; ++sh) {
        Shape s{};
        s.bar = rng.uniform() < p.bar_prob;
        s.cx = rng.uniform(0.0, cols);
        s.cy = rng.uniform(0.0, rows);
        s.r = sample_radius(rng, p);
        if (s.bar) {
            s.half_w = std::max(1.0, s.r * rng.uniform(0.15, 0.5));
            double ang = rng.uniform(0.0, kPi);
            s.ca = std::cos(ang);
            s.sa = std::sin(ang);
        }
        s.gray = rng.uniform(p.gray_lo, p.gray_hi);
        s.textured = rng.uniform() < p.texture_prob;
        if (s.textured) {
            s.tex_freq = rng.uniform(0.04, 0.25);
            s.tex_angle = rng.uniform(0.0, kPi);
            s.tex_phase = rng.uniform(0.0, 2.0 * kPi);
            s.tex_amp = p.texture_amp * rng.uniform(0.5, 1.5);
        }

        double reach = (s.bar ? s.r : s.r) + p.edge_smooth + 1.0;
        int r0 = std::max(0, static_cast<int>(std::floor(s.cy - reach)));
        int r1 = std::min(rows - 1, static_cast<int>(std::ceil(s.cy + reach)));
        int c0 = std::max(0, static_cast<int>(std::floor(s.cx - reach)));
        int c1 = std::min(cols - 1, static_cast<int>(std::ceil(s.cx + reach)));
        for (int r = r0; r <= r1; ++r)
            for (int c = c0; c <= c1; ++c) {
                size_t k = static_cast<size_t>(r) * cols + c;
                double t = trans[k];
                if (t < cutoff) continue;
                double a = s.alpha(c + 0.5, r + 0.5, p.edge_smooth);
                if (a <= 0.0) continue;
                img.v[k] += t * a * s.color(c + 0.5, r + 0.5);
                trans[k] = t * (1.0 - a);
                if (trans[k] < cutoff) --open;
            }
    }
    // Whatever transmittance is left falls onto a mid-gray backdrop.
    double backdrop = 0.5 * (p.gray_lo + p.gray_hi);
    for (size_t k = 0; k < img.v.size(); ++k) img.v[k] += trans[k] * backdrop;
    if (p.blur_sigma > 0.0) gaussian_blur(img, p.blur_sigma);
    for (double& v : img.v) v = clip255(v);
    return img;
}

std::vector<Image> synth_corpus(int rows, int cols, int count, std::uint64_t base_seed,
                                const SceneParams& p) {
    if (count < 1) throw std::invalid_argument("synth_corpus: count must be >= 1");
    if (p.sharp_frac < 0.0 || p.sharp_frac > 1.0)
        throw std::invalid_argument("synth_corpus: sharp_frac out of [0,1]");
    std::vector<Image> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        SceneParams pi = p;
        // Evenly interleave the in-focus images (Bresenham spacing keeps the
        // realized fraction exact for any count).
        if (std::floor((i + 1) * p.sharp_frac) > std::floor(i * p.sharp_frac))
            pi.blur_sigma = 0.0;
        out.push_back(synth_scene(rows, cols, base_seed + 1 + i, pi));
    }
    return out;
}

Image test_scene(int variant) {
    if (variant == 0) {
        // Busier and crisper than the corpus default: more mid-size structure
        // and texture, no extra blur pass, tuned so SSIM against a var=400
        // Gaussian-corrupted copy sits in the high-0.4s like the classic
        // 256x256 photographic test images.
        SceneParams p;
        p.r_min = 4.8;
        p.r_max = 62.0;
        p.power = 2.15;
        p.bar_prob = 0.36;
        p.texture_prob = 0.44;
        p.texture_amp = 7.8;
        p.edge_smooth = 1.1;
        p.blur_sigma = 0.0;
        return synth_scene(256, 256, 4242, p);
    }
    // Calmer frames in the spirit of infrared captures: larger regions, soft
    // edges, sparse low-amplitude texture, a compressed mid-gray range. Column
    // and row artifacts read clearly against these, where on the busy variant
    // they vanish into texture.
    SceneParams p;
    p.r_min = 10.0;
    p.r_max = 70.0;
    p.power = 2.1;
    p.gray_lo = 70.0;
    p.gray_hi = 210.0;
    p.bar_prob = 0.25;
    p.texture_prob = 0.15;
    p.texture_amp = 3.0;
    p.edge_smooth = 1.3;
    p.blur_sigma = 0.0;
    return synth_scene(256, 256, variant == 1 ? 9805 : 9414, p);
}

} // namespace svrdn
