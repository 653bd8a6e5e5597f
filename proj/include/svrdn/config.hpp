#pragma once

#include "svrdn/denoise.hpp"
#include "svrdn/noisegen.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace svrdn {

// Everything a later denoise run needs, as produced by calibration against a
// corpus and one noise model: transform/kernel settings, per-scale slack
// weights, per-band gains, the noise level, and the two reference
// pair-histograms driving the tau search.
struct Calibration {
    SteerableSpec transform;
    KernelSpec kernel;
    std::map<std::string, double> k_scale;
    GainProfile gains;
    double c_global = 1000.0;
    std::vector<double> tau_grid = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    double sigma_n = 0.0;
    std::map<std::string, double> band_sigma; // empty for white-noise models
    int patch_size = 16;
    NoiseSpec noise;
    Hist2D signal_ref;
    Hist2D noise_ref;

    DenoiseConfig denoise_config() const;
};

// Replay file for the experiment command. Unknown keys anywhere in the tree
// are rejected so a typo cannot silently fall back to a default.
struct RunConfig {
    std::uint64_t seed = 1;
    std::string out_dir;
    std::string corpus_dir;
    size_t corpus_limit = 60;
    std::vector<std::string> test_images;
    SteerableSpec transform;
    KernelSpec kernel;
    double c_global = 1000.0;
    std::vector<double> tau_grid = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    int patch_size = 16;
    std::string eps_model = "white"; // or "subband": per-band measured noise stds
    std::vector<NoiseSpec> noises;
};

nlohmann::json noise_to_json(const NoiseSpec& spec);
NoiseSpec noise_from_json(const nlohmann::json& j);

nlohmann::json hist_to_json(const Hist2D& h);
Hist2D hist_from_json(const nlohmann::json& j);

nlohmann::json calibration_to_json(const Calibration& c);
Calibration calibration_from_json(const nlohmann::json& j);
void save_calibration(const Calibration& c, const std::string& path);
Calibration load_calibration(const std::string& path);

RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

} // namespace svrdn
