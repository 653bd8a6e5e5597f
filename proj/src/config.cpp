#include "svrdn/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace svrdn {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument("config: unknown key \"" + it.key() + "\" in " + where);
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : it->get<T>();
}

json transform_to_json(const SteerableSpec& s) {
    return {{"n_scales", s.n_scales}, {"n_orients", s.n_orients}};
}

SteerableSpec transform_from_json(const json& j) {
    check_keys(j, {"n_scales", "n_orients"}, "transform");
    SteerableSpec s;
    s.n_scales = get_or(j, "n_scales", s.n_scales);
    s.n_orients = get_or(j, "n_orients", s.n_orients);
    return s;
}

json kernel_to_json(const KernelSpec& k) {
    return {{"sigma1", k.sigma1}, {"sigma2", k.sigma2}};
}

KernelSpec kernel_from_json(const json& j) {
    check_keys(j, {"sigma1", "sigma2"}, "kernel");
    KernelSpec k;
    k.sigma1 = get_or(j, "sigma1", k.sigma1);
    k.sigma2 = get_or(j, "sigma2", k.sigma2);
    k.validate();
    return k;
}

} // namespace

json noise_to_json(const NoiseSpec& spec) {
    json j;
    j["type"] = spec.name();
    j["seed"] = spec.seed;
    if (const auto* g = std::get_if<GaussianSpec>(&spec.variant)) {
        j["var"] = g->var;
    } else if (const auto* s = std::get_if<StripingSpec>(&spec.variant)) {
        j["col_frac"] = s->col_frac;
        j["factor_lo"] = s->factor_lo;
        j["factor_hi"] = s->factor_hi;
        j["group_min"] = s->group_min;
        j["group_max"] = s->group_max;
    } else if (const auto* i = std::get_if<IrisSpec>(&spec.variant)) {
        j["gauss_var"] = i->gauss_var;
        j["salt_pepper_frac"] = i->salt_pepper_frac;
        j["patches_min"] = i->patches_min;
        j["patches_max"] = i->patches_max;
        j["patch_px_min"] = i->patch_px_min;
        j["patch_px_max"] = i->patch_px_max;
        j["interlace_gain"] = i->interlace_gain;
        j["enable_gauss"] = i->enable_gauss;
        j["enable_salt_pepper"] = i->enable_salt_pepper;
        j["enable_patches"] = i->enable_patches;
        j["enable_interlace"] = i->enable_interlace;
    } else if (const auto* p = std::get_if<JpegSpec>(&spec.variant)) {
        j["coarseness"] = p->coarseness;
    } else if (const auto* k = std::get_if<J2kSpec>(&spec.variant)) {
        j["delta"] = k->delta;
    }
    return j;
}

NoiseSpec noise_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw std::invalid_argument("config: noise spec needs a \"type\"");
    std::string type = j.at("type").get<std::string>();
    NoiseSpec spec;
    spec.seed = get_or<std::uint64_t>(j, "seed", 1);
    if (type == "gaussian") {
        check_keys(j, {"type", "seed", "var"}, "gaussian noise");
        GaussianSpec g;
        g.var = get_or(j, "var", g.var);
        if (!(g.var > 0.0)) throw std::invalid_argument("config: gaussian var must be positive");
        spec.variant = g;
    } else if (type == "striping") {
        check_keys(j, {"type", "seed", "col_frac", "factor_lo", "factor_hi", "group_min",
                       "group_max"},
                   "striping noise");
        StripingSpec s;
        s.col_frac = get_or(j, "col_frac", s.col_frac);
        s.factor_lo = get_or(j, "factor_lo", s.factor_lo);
        s.factor_hi = get_or(j, "factor_hi", s.factor_hi);
        s.group_min = get_or(j, "group_min", s.group_min);
        s.group_max = get_or(j, "group_max", s.group_max);
        if (s.col_frac <= 0.0 || s.col_frac > 1.0)
            throw std::invalid_argument("config: striping col_frac out of (0,1]");
        spec.variant = s;
    } else if (type == "iris") {
        check_keys(j, {"type", "seed", "gauss_var", "salt_pepper_frac", "patches_min",
                       "patches_max", "patch_px_min", "patch_px_max", "interlace_gain",
                       "enable_gauss", "enable_salt_pepper", "enable_patches",
                       "enable_interlace"},
                   "iris noise");
        IrisSpec i;
        i.gauss_var = get_or(j, "gauss_var", i.gauss_var);
        i.salt_pepper_frac = get_or(j, "salt_pepper_frac", i.salt_pepper_frac);
        i.patches_min = get_or(j, "patches_min", i.patches_min);
        i.patches_max = get_or(j, "patches_max", i.patches_max);
        i.patch_px_min = get_or(j, "patch_px_min", i.patch_px_min);
        i.patch_px_max = get_or(j, "patch_px_max", i.patch_px_max);
        i.interlace_gain = get_or(j, "interlace_gain", i.interlace_gain);
        i.enable_gauss = get_or(j, "enable_gauss", i.enable_gauss);
        i.enable_salt_pepper = get_or(j, "enable_salt_pepper", i.enable_salt_pepper);
        i.enable_patches = get_or(j, "enable_patches", i.enable_patches);
        i.enable_interlace = get_or(j, "enable_interlace", i.enable_interlace);
        spec.variant = i;
    } else if (type == "jpeg_like") {
        check_keys(j, {"type", "seed", "coarseness"}, "jpeg_like noise");
        JpegSpec p;
        p.coarseness = get_or(j, "coarseness", p.coarseness);
        if (p.coarseness < 0.0)
            throw std::invalid_argument("config: jpeg_like coarseness must be >= 0");
        spec.variant = p;
    } else if (type == "j2k_like") {
        check_keys(j, {"type", "seed", "delta"}, "j2k_like noise");
        J2kSpec k;
        k.delta = get_or(j, "delta", k.delta);
        if (k.delta < 0.0) throw std::invalid_argument("config: j2k_like delta must be >= 0");
        spec.variant = k;
    } else {
        throw std::invalid_argument("config: unknown noise type \"" + type + "\"");
    }
    return spec;
}

json hist_to_json(const Hist2D& h) {
    return {{"n_bins", h.n_bins},
            {"lo", h.edges_x.front()},
            {"hi", h.edges_x.back()},
            {"prob", h.prob}};
}

Hist2D hist_from_json(const json& j) {
    check_keys(j, {"n_bins", "lo", "hi", "prob"}, "histogram");
    Hist2D h;
    h.n_bins = j.at("n_bins").get<int>();
    double lo = j.at("lo").get<double>(), hi = j.at("hi").get<double>();
    if (h.n_bins < 2 || !(hi > lo))
        throw std::invalid_argument("config: malformed histogram header");
    h.edges_x.resize(h.n_bins + 1);
    for (int i = 0; i <= h.n_bins; ++i)
        h.edges_x[i] = lo + (hi - lo) * i / h.n_bins;
    h.edges_y = h.edges_x;
    h.prob = j.at("prob").get<std::vector<double>>();
    if (h.prob.size() != static_cast<size_t>(h.n_bins) * h.n_bins)
        throw std::invalid_argument("config: histogram prob length mismatch");
    return h;
}

DenoiseConfig Calibration::denoise_config() const {
    DenoiseConfig cfg;
    cfg.profiles.k_scale = k_scale;
    cfg.profiles.gains = gains;
    cfg.profiles.c_global = c_global;
    cfg.kernel = kernel;
    cfg.transform = transform;
    cfg.tau_grid = tau_grid;
    cfg.sigma_n = sigma_n;
    cfg.band_sigma = band_sigma;
    cfg.patch_size = patch_size;
    return cfg;
}

json calibration_to_json(const Calibration& c) {
    json j;
    j["transform"] = transform_to_json(c.transform);
    j["kernel"] = kernel_to_json(c.kernel);
    j["k_scale"] = c.k_scale;
    j["gains"] = c.gains;
    j["c_global"] = c.c_global;
    j["tau_grid"] = c.tau_grid;
    j["sigma_n"] = c.sigma_n;
    if (!c.band_sigma.empty()) j["band_sigma"] = c.band_sigma;
    j["patch_size"] = c.patch_size;
    j["noise"] = noise_to_json(c.noise);
    j["signal_ref"] = hist_to_json(c.signal_ref);
    j["noise_ref"] = hist_to_json(c.noise_ref);
    return j;
}

Calibration calibration_from_json(const json& j) {
    check_keys(j,
               {"transform", "kernel", "k_scale", "gains", "c_global", "tau_grid", "sigma_n",
                "band_sigma", "patch_size", "noise", "signal_ref", "noise_ref"},
               "calibration");
    Calibration c;
    if (j.contains("transform")) c.transform = transform_from_json(j.at("transform"));
    if (j.contains("kernel")) c.kernel = kernel_from_json(j.at("kernel"));
    c.k_scale = get_or(j, "k_scale", c.k_scale);
    c.gains = get_or(j, "gains", c.gains);
    c.c_global = get_or(j, "c_global", c.c_global);
    c.tau_grid = get_or(j, "tau_grid", c.tau_grid);
    c.sigma_n = get_or(j, "sigma_n", c.sigma_n);
    c.band_sigma = get_or(j, "band_sigma", c.band_sigma);
    c.patch_size = get_or(j, "patch_size", c.patch_size);
    if (j.contains("noise")) c.noise = noise_from_json(j.at("noise"));
    if (!j.contains("signal_ref") || !j.contains("noise_ref"))
        throw std::invalid_argument("config: calibration needs signal_ref and noise_ref");
    c.signal_ref = hist_from_json(j.at("signal_ref"));
    c.noise_ref = hist_from_json(j.at("noise_ref"));
    return c;
}

void save_calibration(const Calibration& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("config: cannot write " + path);
    out << calibration_to_json(c).dump(1) << "\n";
}

Calibration load_calibration(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot read " + path);
    json j = json::parse(in);
    return calibration_from_json(j);
}

RunConfig run_config_from_json(const json& j) {
    check_keys(j,
               {"seed", "out_dir", "corpus_dir", "corpus_limit", "test_images", "transform",
                "kernel", "c_global", "tau_grid", "patch_size", "eps_model", "noises"},
               "run config");
    RunConfig cfg;
    cfg.seed = get_or(j, "seed", cfg.seed);
    cfg.out_dir = get_or(j, "out_dir", cfg.out_dir);
    cfg.corpus_dir = get_or(j, "corpus_dir", cfg.corpus_dir);
    cfg.corpus_limit = get_or(j, "corpus_limit", cfg.corpus_limit);
    cfg.test_images = get_or(j, "test_images", cfg.test_images);
    if (j.contains("transform")) cfg.transform = transform_from_json(j.at("transform"));
    if (j.contains("kernel")) cfg.kernel = kernel_from_json(j.at("kernel"));
    cfg.c_global = get_or(j, "c_global", cfg.c_global);
    cfg.tau_grid = get_or(j, "tau_grid", cfg.tau_grid);
    cfg.patch_size = get_or(j, "patch_size", cfg.patch_size);
    cfg.eps_model = get_or(j, "eps_model", cfg.eps_model);
    if (cfg.eps_model != "white" && cfg.eps_model != "subband")
        throw std::invalid_argument("config: eps_model must be white or subband");
    if (j.contains("noises")) {
        if (!j.at("noises").is_array())
            throw std::invalid_argument("config: noises must be an array");
        for (const auto& n : j.at("noises")) cfg.noises.push_back(noise_from_json(n));
    }
    if (cfg.out_dir.empty()) throw std::invalid_argument("config: out_dir is required");
    if (cfg.corpus_dir.empty()) throw std::invalid_argument("config: corpus_dir is required");
    if (cfg.test_images.empty())
        throw std::invalid_argument("config: test_images must list at least one image");
    if (cfg.noises.empty())
        throw std::invalid_argument("config: noises must list at least one spec");
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot read " + path);
    json j = json::parse(in);
    return run_config_from_json(j);
}

} // namespace svrdn
