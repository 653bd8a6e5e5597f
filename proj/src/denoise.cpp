#include "svrdn/denoise.hpp"

#include "svrdn/ortho.hpp"
#include "svrdn/rng.hpp"
#include "svrdn/svr.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace svrdn {

namespace {

std::string scale_key(int scale) { return scale == 0 ? "high" : "s" + std::to_string(scale); }

double band_std(const Grid& g) {
    double mean = 0.0;
    for (double v : g.v) mean += v;
    mean /= static_cast<double>(g.v.size());
    double var = 0.0;
    for (double v : g.v) var += (v - mean) * (v - mean);
    return std::sqrt(var / static_cast<double>(g.v.size()));
}

} // namespace

std::map<std::string, double> c_profile(const std::vector<Image>& corpus,
                                        const SteerableSpec& spec) {
    if (corpus.size() < 10) throw std::invalid_argument("c_profile: corpus too small");
    int rows = corpus[0].rows, cols = corpus[0].cols;
    SteerableTransform xf(rows, cols, spec);

    std::map<std::string, double> acc;
    for (const Image& img : corpus) {
        if (img.rows != rows || img.cols != cols)
            throw std::invalid_argument("c_profile: images must share dimensions");
        Pyramid pyr = xf.forward(img);
        acc["high"] += band_std(pyr.highpass);
        for (int s = 1; s <= spec.n_scales; ++s) {
            // One std over the pooled coefficients of the scale.
            double sq = 0.0, mean = 0.0;
            size_t n = 0;
            for (const Grid& b : pyr.bands[s - 1]) {
                for (double v : b.v) {
                    mean += v;
                    sq += v * v;
                }
                n += b.v.size();
            }
            mean /= static_cast<double>(n);
            acc[scale_key(s)] += std::sqrt(std::max(0.0, sq / static_cast<double>(n) - mean * mean));
        }
    }
    for (auto& [k, v] : acc) {
        v /= static_cast<double>(corpus.size());
        if (!(v > 0.0)) throw std::invalid_argument("c_profile: degenerate corpus (zero variance)");
    }
    return acc;
}

std::map<std::string, double> eps_profile(const GainProfile& gains, double sigma_n, double tau) {
    if (sigma_n < 0.0) throw std::invalid_argument("eps_profile: negative sigma_n");
    if (!(tau > 0.0)) throw std::invalid_argument("eps_profile: tau must be positive");
    std::map<std::string, double> eps;
    for (const auto& [id, g] : gains) eps[id] = tau * sigma_n * g;
    return eps;
}

std::map<std::string, double> eps_profile(const std::map<std::string, double>& band_sigma,
                                          double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("eps_profile: tau must be positive");
    std::map<std::string, double> eps;
    for (const auto& [id, s] : band_sigma) {
        if (s < 0.0) throw std::invalid_argument("eps_profile: negative band sigma " + id);
        eps[id] = tau * s;
    }
    return eps;
}

std::map<std::string, double> band_noise_sigma(const std::vector<Image>& corpus,
                                               const NoiseSpec& spec,
                                               const SteerableSpec& transform) {
    if (corpus.size() < 10) throw std::invalid_argument("band_noise_sigma: corpus too small");
    int rows = corpus[0].rows, cols = corpus[0].cols;
    SteerableTransform xf(rows, cols, transform);

    std::map<std::string, double> sum, sq;
    std::map<std::string, size_t> count;
    auto accumulate = [&](const std::string& id, const Grid& g) {
        double& s = sum[id];
        double& q = sq[id];
        for (double v : g.v) {
            s += v;
            q += v * v;
        }
        count[id] += g.v.size();
    };
    for (size_t i = 0; i < corpus.size(); ++i) {
        if (corpus[i].rows != rows || corpus[i].cols != cols)
            throw std::invalid_argument("band_noise_sigma: images must share dimensions");
        NoiseSpec per = spec;
        per.seed = spec.seed + 1000003 * (i + 1);
        auto [noisy, residual] = apply_noise(corpus[i], per);
        Pyramid pyr = xf.forward(residual);
        accumulate(kHighpassId, pyr.highpass);
        for (int s = 1; s <= transform.n_scales; ++s)
            for (int o = 0; o < transform.n_orients; ++o)
                accumulate(band_id(s, o), pyr.bands[s - 1][o]);
    }
    std::map<std::string, double> sigma;
    for (const auto& [id, q] : sq) {
        double n = static_cast<double>(count[id]);
        double mean = sum[id] / n;
        sigma[id] = std::sqrt(std::max(0.0, q / n - mean * mean));
    }
    return sigma;
}

DenoisePipeline::DenoisePipeline(int rows, int cols, const DenoiseConfig& cfg)
    : cfg_(cfg), xf_(rows, cols, cfg.transform) {
    cfg_.kernel.validate();
    if (cfg_.patch_size < 2) throw std::invalid_argument("denoise: patch_size too small");
    int K = cfg_.transform.n_orients;

    auto make_plan = [&](const std::string& id, int scale, int brows, int bcols, double alpha,
                         bool isotropic) {
        BandPlan plan;
        plan.id = id;
        plan.scale = scale;
        plan.alpha = alpha;
        plan.isotropic = isotropic;
        PatchGrid pg = tile(Grid(brows, bcols), cfg_.patch_size);
        for (const Patch& p : pg.patches) {
            std::vector<PixelPos> pos;
            pos.reserve(p.block.v.size());
            for (int r = 0; r < p.block.rows; ++r)
                for (int c = 0; c < p.block.cols; ++c) pos.emplace_back(r, c);
            // Gram matrices depend only on (orientation, shape); share them.
            std::string cache_key = (isotropic ? "iso" : std::to_string(alpha)) + ":" +
                                    std::to_string(p.block.rows) + "x" +
                                    std::to_string(p.block.cols);
            auto it = gram_cache_.find(cache_key);
            std::shared_ptr<const Eigen::MatrixXd> gram;
            if (it == gram_cache_.end()) {
                KernelSpec ks = cfg_.kernel;
                ks.alpha = alpha;
                ks.isotropic = isotropic;
                gram = std::make_shared<Eigen::MatrixXd>(kernel_matrix(pos, ks));
                gram_cache_.emplace(cache_key, gram);
            } else {
                gram = it->second;
            }
            plan.gram.push_back(std::move(gram));
            plan.positions.push_back(std::move(pos));
        }
        plans_.push_back(std::move(plan));
    };

    // Band o is spatially coherent along the direction -pi*o/K in (row, col)
    // coordinates (rows grow downward), so the kernel's slow axis follows the
    // negated angle.
    make_plan(kHighpassId, 0, rows, cols, 0.0, true);
    int br = rows, bc = cols;
    for (int s = 1; s <= cfg_.transform.n_scales; ++s) {
        for (int o = 0; o < K; ++o)
            make_plan(band_id(s, o), s, br, bc, -std::numbers::pi * o / K, false);
        br = (br + 1) / 2;
        bc = (bc + 1) / 2;
    }
}

void DenoisePipeline::regress_band(Grid& band, const BandPlan& plan, double eps_b,
                                   double c_b) const {
    PatchGrid pg = tile(band, cfg_.patch_size);
    for (size_t pi = 0; pi < pg.patches.size(); ++pi) {
        Patch& p = pg.patches[pi];
        int n = static_cast<int>(p.block.v.size());
        SvrProblem prob;
        prob.K = plan.gram[pi];
        prob.y = Eigen::Map<const Eigen::VectorXd>(p.block.v.data(), n);
        prob.eps = Eigen::VectorXd::Constant(n, eps_b);
        prob.c = Eigen::VectorXd::Constant(n, c_b);
        SvrSolution sol = solve(prob, cfg_.solver_tol);
        for (int k = 0; k < n; ++k) p.block.v[k] = sol.estimate[k];
    }
    band = untile(pg);
}

std::pair<Image, Image> DenoisePipeline::run(const Image& noisy, double tau) const {
    std::map<std::string, double> eps =
        cfg_.band_sigma.empty() ? eps_profile(cfg_.profiles.gains, cfg_.sigma_n, tau)
                                : eps_profile(cfg_.band_sigma, tau);
    Pyramid pyr = xf_.forward(noisy);

    for (const BandPlan& plan : plans_) {
        auto ke = cfg_.profiles.k_scale.find(scale_key(plan.scale));
        if (ke == cfg_.profiles.k_scale.end())
            throw std::invalid_argument("denoise: k_scale missing entry " + scale_key(plan.scale));
        auto ee = eps.find(plan.id);
        if (ee == eps.end())
            throw std::invalid_argument("denoise: insensitivity profile missing band " + plan.id);
        double c_b = cfg_.profiles.c_global * ke->second;
        Grid* band = nullptr;
        if (plan.scale == 0) {
            band = &pyr.highpass;
        } else {
            int o = std::stoi(plan.id.substr(plan.id.find('o') + 1));
            band = &pyr.bands[plan.scale - 1][o];
        }
        regress_band(*band, plan, ee->second, c_b);
    }
    // Lowpass residual passes through untouched (it carries the DC/mean).

    Image estimate = xf_.inverse(pyr);
    for (double& v : estimate.v) v = clip255(v);
    Image noise_est(noisy.rows, noisy.cols);
    for (size_t k = 0; k < noise_est.v.size(); ++k) noise_est.v[k] = noisy.v[k] - estimate.v[k];
    return {std::move(estimate), std::move(noise_est)};
}

std::pair<Image, Image> denoise_once(const Image& noisy, const DenoiseConfig& cfg) {
    DenoisePipeline pipe(noisy.rows, noisy.cols, cfg);
    return pipe.run(noisy, cfg.profiles.tau);
}

TauSelection select_tau(const Image& noisy, const Hist2D& signal_ref, const Hist2D& noise_ref,
                        const DenoiseConfig& cfg) {
    if (cfg.tau_grid.empty()) throw std::invalid_argument("select_tau: empty tau grid");
    for (size_t i = 1; i < cfg.tau_grid.size(); ++i)
        if (!(cfg.tau_grid[i] > cfg.tau_grid[i - 1]))
            throw std::invalid_argument("select_tau: tau grid must be ascending");

    DenoisePipeline pipe(noisy.rows, noisy.cols, cfg);
    TauSelection sel;
    double best = std::numeric_limits<double>::infinity();
    for (double tau : cfg.tau_grid) {
        auto [est, nest] = pipe.run(noisy, tau);
        Hist2D est_h = pair_hist(est, 0, 1, kPairBins, kSignalLo, kSignalHi);
        Hist2D nest_h = pair_hist(nest, 0, 1, kPairBins, kNoiseLo, kNoiseHi);
        double score = kld(est_h, signal_ref) + kld(nest_h, noise_ref);
        sel.scores.emplace_back(tau, score);
        sel.estimates.push_back(est);
        if (score < best) { // strict: ties keep the earlier (smaller) tau
            best = score;
            sel.tau_star = tau;
            sel.estimate = std::move(est);
            sel.noise_estimate = std::move(nest);
        }
    }
    return sel;
}

namespace {

void threshold_detail(OrthoPyramid& pyr,
                      const std::function<double(double, const std::string&)>& rule) {
    for (int l = 1; l <= pyr.n_levels; ++l) {
        for (auto* bands : {&pyr.lh, &pyr.hl, &pyr.hh}) {
            Grid& g = (*bands)[l - 1];
            const std::string id =
                ortho_band_id(l, bands == &pyr.lh ? "lh" : (bands == &pyr.hl ? "hl" : "hh"));
            for (double& v : g.v) v = rule(v, id);
        }
    }
}

} // namespace

Image hard_threshold(const Image& noisy, double sigma_n) {
    if (sigma_n < 0.0) throw std::invalid_argument("hard_threshold: negative sigma_n");
    OrthoPyramid pyr = ortho_forward(noisy, 4);
    double lambda = 3.0 * sigma_n;
    threshold_detail(pyr, [lambda](double v, const std::string&) {
        return std::abs(v) <= lambda ? 0.0 : v;
    });
    Image out = ortho_inverse(pyr);
    for (double& v : out.v) v = clip255(v);
    return out;
}

Image soft_threshold(const Image& noisy, const std::map<std::string, double>& thresholds) {
    OrthoPyramid pyr = ortho_forward(noisy, 4);
    threshold_detail(pyr, [&thresholds](double v, const std::string& id) {
        auto it = thresholds.find(id);
        if (it == thresholds.end())
            throw std::invalid_argument("soft_threshold: missing threshold for " + id);
        double lam = it->second;
        if (lam < 0.0) throw std::invalid_argument("soft_threshold: negative threshold");
        double m = std::abs(v) - lam;
        return m > 0.0 ? (v < 0.0 ? -m : m) : 0.0;
    });
    Image out = ortho_inverse(pyr);
    for (double& v : out.v) v = clip255(v);
    return out;
}

std::map<std::string, double> optimize_st_thresholds(const std::vector<Image>& corpus,
                                                     double sigma_n, std::uint64_t seed) {
    if (corpus.size() < 10)
        throw std::invalid_argument("optimize_st_thresholds: corpus too small");
    const int levels = 4;
    std::map<std::string, double> out;
    for (int l = 1; l <= levels; ++l)
        for (const char* kind : {"lh", "hl", "hh"}) out[ortho_band_id(l, kind)] = 0.0;
    if (sigma_n == 0.0) return out;

    // Stack (noisy, clean) coefficients per subband over the corpus.
    std::map<std::string, std::vector<std::pair<double, double>>> coeffs;
    Rng rng(seed);
    for (const Image& img : corpus) {
        Image noisy = img;
        for (double& v : noisy.v) v += rng.gaussian(0.0, sigma_n);
        OrthoPyramid pn = ortho_forward(noisy, levels);
        OrthoPyramid pc = ortho_forward(img, levels);
        for (int l = 1; l <= levels; ++l) {
            auto stack = [&](const Grid& gn, const Grid& gc, const std::string& id) {
                auto& dst = coeffs[id];
                for (size_t k = 0; k < gn.v.size(); ++k) dst.emplace_back(gn.v[k], gc.v[k]);
            };
            stack(pn.lh[l - 1], pc.lh[l - 1], ortho_band_id(l, "lh"));
            stack(pn.hl[l - 1], pc.hl[l - 1], ortho_band_id(l, "hl"));
            stack(pn.hh[l - 1], pc.hh[l - 1], ortho_band_id(l, "hh"));
        }
    }

    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (auto& [id, pairs] : coeffs) {
        auto sse = [&pairs](double lam) {
            double e = 0.0;
            for (const auto& [noisy_c, clean_c] : pairs) {
                double m = std::abs(noisy_c) - lam;
                double shrunk = m > 0.0 ? (noisy_c < 0.0 ? -m : m) : 0.0;
                double d = shrunk - clean_c;
                e += d * d;
            }
            return e;
        };
        double a = 0.0, b = 6.0 * sigma_n;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = sse(x1), f2 = sse(x2);
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = sse(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = sse(x2);
            }
        }
        out[id] = 0.5 * (a + b);
    }
    return out;
}

} // namespace svrdn
