#include "svrdn/steerable.hpp"

#include "svrdn/rng.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace svrdn {

namespace {

constexpr double kPi = std::numbers::pi;

// Raised-cosine square-root pair on x = log2(r/pi): hi ramps 0 -> 1 over
// x in [-1, 0], lo = sqrt(1 - hi^2), so hi^2 + lo^2 = 1 everywhere.
double rc_hi(double x) {
    if (x >= 0.0) return 1.0;
    if (x <= -1.0) return 0.0;
    return std::cos(0.5 * kPi * x);
}

double rc_lo(double x) {
    double h = rc_hi(x);
    return std::sqrt(std::max(0.0, 1.0 - h * h));
}

struct Polar {
    std::vector<double> logr;  // log2(r/pi), very negative at DC
    std::vector<double> theta; // atan2(wy, wx)
};

// Shifted-layout frequency grid: DC sits at (rows/2, cols/2).
Polar make_polar(int rows, int cols) {
    Polar p;
    p.logr.resize(static_cast<size_t>(rows) * cols);
    p.theta.resize(p.logr.size());
    for (int r = 0; r < rows; ++r) {
        double wy = 2.0 * kPi * (r - rows / 2) / rows;
        for (int c = 0; c < cols; ++c) {
            double wx = 2.0 * kPi * (c - cols / 2) / cols;
            size_t k = static_cast<size_t>(r) * cols + c;
            double rad = std::hypot(wy, wx);
            p.logr[k] = rad > 0.0 ? std::log2(rad / kPi) : -1e9;
            p.theta[k] = std::atan2(wy, wx);
        }
    }
    return p;
}

double ipow(double base, int n) {
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= base;
    return v;
}

double factorial(int n) {
    double v = 1.0;
    for (int i = 2; i <= n; ++i) v *= i;
    return v;
}

// Central crop in shifted layout; DC maps to DC.
cvec crop_center(const cvec& a, int rows, int cols, int crows, int ccols) {
    int r0 = rows / 2 - crows / 2;
    int c0 = cols / 2 - ccols / 2;
    cvec out(static_cast<size_t>(crows) * ccols);
    for (int r = 0; r < crows; ++r)
        for (int c = 0; c < ccols; ++c)
            out[static_cast<size_t>(r) * ccols + c] =
                a[static_cast<size_t>(r + r0) * cols + (c + c0)];
    return out;
}

cvec embed_center(const cvec& a, int rows, int cols, int prows, int pcols) {
    int r0 = prows / 2 - rows / 2;
    int c0 = pcols / 2 - cols / 2;
    cvec out(static_cast<size_t>(prows) * pcols, {0.0, 0.0});
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            out[static_cast<size_t>(r + r0) * pcols + (c + c0)] =
                a[static_cast<size_t>(r) * cols + c];
    return out;
}

std::complex<double> minus_i_pow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

void write_f32(const std::filesystem::path& path, const Grid& g) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open file for writing: " + path.string());
    std::vector<float> buf(g.v.size());
    for (size_t i = 0; i < g.v.size(); ++i) buf[i] = static_cast<float>(g.v[i]);
    f.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

Grid read_f32(const std::filesystem::path& path, int rows, int cols) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open file: " + path.string());
    std::vector<float> buf(static_cast<size_t>(rows) * cols);
    f.read(reinterpret_cast<char*>(buf.data()),
           static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (f.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(float)))
        throw std::runtime_error("truncated band file: " + path.string());
    Grid g(rows, cols);
    for (size_t i = 0; i < buf.size(); ++i) g.v[i] = buf[i];
    return g;
}

} // namespace

std::string band_id(int scale, int orient) {
    return "s" + std::to_string(scale) + "o" + std::to_string(orient);
}

SteerableTransform::SteerableTransform(int rows, int cols, const SteerableSpec& spec)
    : rows_(rows), cols_(cols), spec_(spec) {
    if (spec.n_scales < 1 || spec.n_orients < 1)
        throw std::invalid_argument("steerable: n_scales and n_orients must be >= 1");
    int div = 1 << spec.n_scales;
    if (rows <= 0 || cols <= 0 || rows % div != 0 || cols % div != 0)
        throw std::invalid_argument("steerable: image dims must be divisible by 2^n_scales");

    int order = spec.n_orients - 1;
    // Normalization making the squared angular masks sum to 1 over orientations.
    double ang_const = ipow(2.0, 2 * order) * factorial(order) * factorial(order) /
                       (spec.n_orients * factorial(2 * order));
    double beta = std::sqrt(ang_const);

    Polar full = make_polar(rows, cols);
    size_t n = full.logr.size();
    hi0_.resize(n);
    lo0_.resize(n);
    for (size_t k = 0; k < n; ++k) {
        hi0_[k] = rc_hi(full.logr[k]);
        lo0_[k] = rc_lo(full.logr[k]);
    }

    int mr = rows, mc = cols;
    for (int s = 1; s <= spec.n_scales; ++s) {
        Level lv;
        lv.rows = mr;
        lv.cols = mc;
        Polar p = make_polar(mr, mc);
        size_t ln = p.logr.size();
        lv.hi.resize(ln);
        for (size_t k = 0; k < ln; ++k) lv.hi[k] = rc_hi(p.logr[k] + 1.0);
        lv.ang.assign(spec.n_orients, std::vector<double>(ln));
        for (int o = 0; o < spec.n_orients; ++o) {
            double center = kPi * o / spec.n_orients;
            for (size_t k = 0; k < ln; ++k)
                lv.ang[o][k] = beta * ipow(std::cos(p.theta[k] - center), order);
        }
        int cr = (mr + 1) / 2, cc = (mc + 1) / 2;
        Polar pc = make_polar(cr, cc);
        lv.lo.resize(pc.logr.size());
        for (size_t k = 0; k < pc.logr.size(); ++k) lv.lo[k] = rc_lo(pc.logr[k]);
        levels_.push_back(std::move(lv));
        mr = cr;
        mc = cc;
    }
    lp_rows_ = mr;
    lp_cols_ = mc;

    ffts_.push_back(std::make_unique<Fft2>(rows, cols));
    for (const Level& lv : levels_)
        if (lv.rows != rows || lv.cols != cols) {
            if (fft_cached(lv.rows, lv.cols) == nullptr)
                ffts_.push_back(std::make_unique<Fft2>(lv.rows, lv.cols));
        }
    if (fft_cached(lp_rows_, lp_cols_) == nullptr)
        ffts_.push_back(std::make_unique<Fft2>(lp_rows_, lp_cols_));
}

const Fft2* SteerableTransform::fft_cached(int rows, int cols) const {
    for (const auto& f : ffts_)
        if (f->rows() == rows && f->cols() == cols) return f.get();
    return nullptr;
}

const Fft2& SteerableTransform::fft_for(int rows, int cols) const {
    const Fft2* f = fft_cached(rows, cols);
    if (!f) throw std::logic_error("steerable: no plan for requested size");
    return *f;
}

namespace {

// Spatial grid from a shifted spectrum, discarding the ~0 imaginary part.
Grid to_spatial(const Fft2& fft, cvec spec, int rows, int cols) {
    ifftshift2(spec, rows, cols);
    cvec out;
    fft.inverse(spec, out);
    Grid g(rows, cols);
    for (size_t k = 0; k < out.size(); ++k) g.v[k] = out[k].real();
    return g;
}

cvec to_spectrum(const Fft2& fft, const Grid& g) {
    cvec in(g.v.size());
    for (size_t k = 0; k < in.size(); ++k) in[k] = {g.v[k], 0.0};
    cvec out;
    fft.forward(in, out);
    fftshift2(out, g.rows, g.cols);
    return out;
}

} // namespace

Pyramid SteerableTransform::forward(const Grid& img) const {
    if (img.rows != rows_ || img.cols != cols_)
        throw std::invalid_argument("steerable: image size does not match transform");

    Pyramid pyr;
    pyr.spec = spec_;
    const Fft2& full = fft_for(rows_, cols_);
    cvec F = to_spectrum(full, img);

    cvec hp(F.size());
    for (size_t k = 0; k < F.size(); ++k) hp[k] = F[k] * hi0_[k];
    pyr.highpass = to_spatial(full, std::move(hp), rows_, cols_);

    cvec L(F.size());
    for (size_t k = 0; k < F.size(); ++k) L[k] = F[k] * lo0_[k];

    int order = spec_.n_orients - 1;
    std::complex<double> bf = minus_i_pow(order);
    pyr.bands.resize(spec_.n_scales);
    for (int s = 1; s <= spec_.n_scales; ++s) {
        const Level& lv = levels_[s - 1];
        const Fft2& fft = fft_for(lv.rows, lv.cols);
        pyr.bands[s - 1].reserve(spec_.n_orients);
        for (int o = 0; o < spec_.n_orients; ++o) {
            cvec bd(L.size());
            for (size_t k = 0; k < L.size(); ++k)
                bd[k] = L[k] * (lv.hi[k] * lv.ang[o][k]) * bf;
            pyr.bands[s - 1].push_back(to_spatial(fft, std::move(bd), lv.rows, lv.cols));
        }
        int cr = (lv.rows + 1) / 2, cc = (lv.cols + 1) / 2;
        // The 1/4 keeps band and lowpass amplitudes on the scale of the
        // input (plain spectrum cropping would quadruple values per level).
        cvec Lc = crop_center(L, lv.rows, lv.cols, cr, cc);
        for (size_t k = 0; k < Lc.size(); ++k) Lc[k] *= 0.25 * lv.lo[k];
        L = std::move(Lc);
    }
    pyr.lowpass = to_spatial(fft_for(lp_rows_, lp_cols_), std::move(L), lp_rows_, lp_cols_);
    return pyr;
}

Grid SteerableTransform::inverse(const Pyramid& pyr) const {
    if (pyr.spec.n_scales != spec_.n_scales || pyr.spec.n_orients != spec_.n_orients)
        throw std::invalid_argument("steerable: pyramid spec does not match transform");
    if (pyr.highpass.rows != rows_ || pyr.highpass.cols != cols_ ||
        pyr.lowpass.rows != lp_rows_ || pyr.lowpass.cols != lp_cols_ ||
        static_cast<int>(pyr.bands.size()) != spec_.n_scales)
        throw std::invalid_argument("steerable: pyramid shape mismatch");
    for (int s = 1; s <= spec_.n_scales; ++s) {
        if (static_cast<int>(pyr.bands[s - 1].size()) != spec_.n_orients)
            throw std::invalid_argument("steerable: pyramid shape mismatch");
        for (const Grid& b : pyr.bands[s - 1])
            if (b.rows != levels_[s - 1].rows || b.cols != levels_[s - 1].cols)
                throw std::invalid_argument("steerable: pyramid shape mismatch");
    }

    int order = spec_.n_orients - 1;
    std::complex<double> bf = std::conj(minus_i_pow(order));

    cvec R = to_spectrum(fft_for(lp_rows_, lp_cols_), pyr.lowpass);
    for (int s = spec_.n_scales; s >= 1; --s) {
        const Level& lv = levels_[s - 1];
        for (size_t k = 0; k < R.size(); ++k) R[k] *= 4.0 * lv.lo[k];
        int cr = (lv.rows + 1) / 2, cc = (lv.cols + 1) / 2;
        R = embed_center(R, cr, cc, lv.rows, lv.cols);
        const Fft2& fft = fft_for(lv.rows, lv.cols);
        for (int o = 0; o < spec_.n_orients; ++o) {
            cvec B = to_spectrum(fft, pyr.bands[s - 1][o]);
            for (size_t k = 0; k < R.size(); ++k)
                R[k] += B[k] * (lv.hi[k] * lv.ang[o][k]) * bf;
        }
    }

    const Fft2& full = fft_for(rows_, cols_);
    cvec H = to_spectrum(full, pyr.highpass);
    for (size_t k = 0; k < R.size(); ++k) R[k] = R[k] * lo0_[k] + H[k] * hi0_[k];
    return to_spatial(full, std::move(R), rows_, cols_);
}

Pyramid steerable_forward(const Grid& img, const SteerableSpec& spec) {
    return SteerableTransform(img.rows, img.cols, spec).forward(img);
}

Grid steerable_inverse(const Pyramid& pyr) {
    int rows = pyr.highpass.rows, cols = pyr.highpass.cols;
    return SteerableTransform(rows, cols, pyr.spec).inverse(pyr);
}

GainProfile noise_gain(int rows, int cols, const SteerableSpec& spec,
                       int n_trials, std::uint64_t seed) {
    if (n_trials < 1) throw std::invalid_argument("noise_gain: n_trials must be >= 1");
    SteerableTransform xf(rows, cols, spec);
    Rng rng(seed);
    std::map<std::string, std::pair<double, size_t>> acc; // sum of squares, count
    Grid img(rows, cols);
    for (int t = 0; t < n_trials; ++t) {
        for (auto& v : img.v) v = rng.gaussian();
        Pyramid pyr = xf.forward(img);
        auto add = [&acc](const std::string& id, const Grid& g) {
            auto& slot = acc[id];
            for (double v : g.v) slot.first += v * v;
            slot.second += g.v.size();
        };
        add(kHighpassId, pyr.highpass);
        for (int s = 1; s <= spec.n_scales; ++s)
            for (int o = 0; o < spec.n_orients; ++o)
                add(band_id(s, o), pyr.bands[s - 1][o]);
        add(kLowpassId, pyr.lowpass);
    }
    GainProfile gain;
    for (const auto& [id, slot] : acc)
        gain[id] = std::sqrt(slot.first / static_cast<double>(slot.second));
    return gain;
}

void save_pyramid(const Pyramid& pyr, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    nlohmann::json manifest;
    manifest["n_scales"] = pyr.spec.n_scales;
    manifest["n_orients"] = pyr.spec.n_orients;
    nlohmann::json bands = nlohmann::json::array();

    auto put = [&](const std::string& id, const Grid& g) {
        std::string file = id + ".f32";
        write_f32(fs::path(dir) / file, g);
        bands.push_back({{"id", id}, {"rows", g.rows}, {"cols", g.cols}, {"file", file}});
    };
    put(kHighpassId, pyr.highpass);
    for (int s = 1; s <= pyr.spec.n_scales; ++s)
        for (int o = 0; o < pyr.spec.n_orients; ++o)
            put(band_id(s, o), pyr.bands[s - 1][o]);
    put(kLowpassId, pyr.lowpass);

    manifest["bands"] = bands;
    std::ofstream f(fs::path(dir) / "manifest.json");
    if (!f) throw std::runtime_error("cannot write manifest in " + dir);
    f << manifest.dump(2) << "\n";
}

Pyramid load_pyramid(const std::string& dir) {
    namespace fs = std::filesystem;
    std::ifstream f(fs::path(dir) / "manifest.json");
    if (!f) throw std::runtime_error("cannot open manifest in " + dir);
    nlohmann::json manifest;
    f >> manifest;

    Pyramid pyr;
    pyr.spec.n_scales = manifest.at("n_scales").get<int>();
    pyr.spec.n_orients = manifest.at("n_orients").get<int>();
    if (pyr.spec.n_scales < 1 || pyr.spec.n_orients < 1)
        throw std::runtime_error("invalid manifest in " + dir);
    pyr.bands.resize(pyr.spec.n_scales);
    for (auto& row : pyr.bands) row.resize(pyr.spec.n_orients);

    bool have_high = false, have_low = false;
    std::vector<std::vector<bool>> have(pyr.spec.n_scales,
                                        std::vector<bool>(pyr.spec.n_orients, false));
    for (const auto& b : manifest.at("bands")) {
        std::string id = b.at("id").get<std::string>();
        Grid g = read_f32(fs::path(dir) / b.at("file").get<std::string>(),
                          b.at("rows").get<int>(), b.at("cols").get<int>());
        if (id == kHighpassId) {
            pyr.highpass = std::move(g);
            have_high = true;
        } else if (id == kLowpassId) {
            pyr.lowpass = std::move(g);
            have_low = true;
        } else {
            int scale = 0, orient = 0;
            if (std::sscanf(id.c_str(), "s%do%d", &scale, &orient) != 2 ||
                scale < 1 || scale > pyr.spec.n_scales ||
                orient < 0 || orient >= pyr.spec.n_orients)
                throw std::runtime_error("invalid band id in manifest: " + id);
            pyr.bands[scale - 1][orient] = std::move(g);
            have[scale - 1][orient] = true;
        }
    }
    if (!have_high || !have_low)
        throw std::runtime_error("manifest missing bands in " + dir);
    for (const auto& row : have)
        for (bool h : row)
            if (!h) throw std::runtime_error("manifest missing bands in " + dir);
    return pyr;
}

} // namespace svrdn
