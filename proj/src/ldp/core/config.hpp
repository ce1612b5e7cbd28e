#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ldp {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value run configuration. Unset keys take the published defaults
// (KL weight 0.01, 1000-step warmup to peak LR 1e-4, h=16, T=1000, 95/5
// train/val split). The file format is one `key = value` per line, `#`
// comments, blank lines ignored. Unknown keys and out-of-domain values are
// reported by key name.
struct RunConfig {
    // reproducibility
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = hardware concurrency

    // model dimensions
    int h = 16;            // action trajectory horizon
    int d_z = 64;          // latent width
    int d_model = 256;     // transformer width
    int n_heads = 4;
    int enc_layers = 3;    // trajectory-encoder depth
    int dec_layers = 6;    // trajectory-decoder depth
    int eps_layers = 6;    // noise-prediction network depth
    int mlp_depth = 3;     // observation MLP depth
    int ff_mult = 4;       // transformer feed-forward width multiplier
    int d_img_feat = 128;  // frozen image-encoder output width
    int d_proprio = 4;     // canonical proprio width
    int text_hash_rows = 4096;  // frozen instruction-embedding table rows
    int image_size = 64;   // center-crop output size
    int d_action = 0;      // canonical action width; 0 = derive from data

    // trajectory-autoencoder loss
    double w = 0.01;  // KL weight

    // diffusion
    int T = 1000;
    double beta_start = 1e-4;
    double beta_end = 2e-2;
    std::string schedule = "linear";
    std::string sampler = "ddim";
    int sampler_steps = 50;

    // optimization
    double lr_peak = 1e-4;
    int warmup_steps = 1000;
    int batch_size = 64;
    double grad_clip = 1.0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    int epochs_pretrain = 10;
    int epochs_ata = 200;
    int epochs_lpg = 100;
    double epoch_scale = 1.0;       // scales downstream epoch counts for desk runs
    double epoch_frac = 1.0;        // fraction of train chunks visited per epoch
    double val_fraction = 0.05;

    // data pipeline
    double q = 0.005;        // outlier clip quantile
    std::string mixture;     // "dataset_id:weight,..." ; empty = uniform

    // evaluation
    int n_trials = 50;
    int step_limit = 400;
    int exec_horizon = 0;    // steps executed before re-planning; 0 = all h
    std::string ablation = "full";
    int bench_iters = 100;

    bool operator==(const RunConfig&) const = default;

    void validate() const;               // throws ConfigError naming the bad key
    std::string serialize() const;       // canonical text, fixed key order
    std::uint64_t hash() const;          // hash of canonical serialization
    int resolved_threads() const;
    int exec_horizon_or_h() const { return exec_horizon > 0 ? exec_horizon : h; }

    // Scaled downstream epoch counts (pre-training uses epochs_pretrain as-is).
    int scaled_epochs_ata() const;
    int scaled_epochs_lpg() const;

    // Parsed mixture weights; empty if `mixture` is empty.
    std::vector<std::pair<std::string, double>> mixture_weights() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);  // same rules as load_config
void save_config(const RunConfig& cfg, const std::string& path);

// Keys whose serialized values differ between the two configs.
std::vector<std::string> config_diff(const RunConfig& a, const RunConfig& b);

}  // namespace ldp
