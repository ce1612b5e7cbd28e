#include "ldp/core/config.hpp"

#include "ldp/core/io_util.hpp"
#include "ldp/core/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <thread>

namespace ldp {

namespace {

enum class Kind { U64, Int, Double, Str };

struct KeyDesc {
    const char* name;
    Kind kind;
    std::uint64_t RunConfig::* u64_field = nullptr;
    int RunConfig::* int_field = nullptr;
    double RunConfig::* dbl_field = nullptr;
    std::string RunConfig::* str_field = nullptr;
};

KeyDesc key_u64(const char* n, std::uint64_t RunConfig::* f) { return {n, Kind::U64, f, nullptr, nullptr, nullptr}; }
KeyDesc key_int(const char* n, int RunConfig::* f) { return {n, Kind::Int, nullptr, f, nullptr, nullptr}; }
KeyDesc key_dbl(const char* n, double RunConfig::* f) { return {n, Kind::Double, nullptr, nullptr, f, nullptr}; }
KeyDesc key_str(const char* n, std::string RunConfig::* f) { return {n, Kind::Str, nullptr, nullptr, nullptr, f}; }

#define LDP_KEY_U64(field) key_u64(#field, &RunConfig::field)
#define LDP_KEY_INT(field) key_int(#field, &RunConfig::field)
#define LDP_KEY_DBL(field) key_dbl(#field, &RunConfig::field)
#define LDP_KEY_STR(field) key_str(#field, &RunConfig::field)

// Fixed serialization order; append only.
const KeyDesc kKeys[] = {
    LDP_KEY_U64(seed),
    LDP_KEY_INT(threads),
    LDP_KEY_INT(h),
    LDP_KEY_INT(d_z),
    LDP_KEY_INT(d_model),
    LDP_KEY_INT(n_heads),
    LDP_KEY_INT(enc_layers),
    LDP_KEY_INT(dec_layers),
    LDP_KEY_INT(eps_layers),
    LDP_KEY_INT(mlp_depth),
    LDP_KEY_INT(ff_mult),
    LDP_KEY_INT(d_img_feat),
    LDP_KEY_INT(d_proprio),
    LDP_KEY_INT(text_hash_rows),
    LDP_KEY_INT(image_size),
    LDP_KEY_INT(d_action),
    LDP_KEY_DBL(w),
    LDP_KEY_INT(T),
    LDP_KEY_DBL(beta_start),
    LDP_KEY_DBL(beta_end),
    LDP_KEY_STR(schedule),
    LDP_KEY_STR(sampler),
    LDP_KEY_INT(sampler_steps),
    LDP_KEY_DBL(lr_peak),
    LDP_KEY_INT(warmup_steps),
    LDP_KEY_INT(batch_size),
    LDP_KEY_DBL(grad_clip),
    LDP_KEY_DBL(adam_beta1),
    LDP_KEY_DBL(adam_beta2),
    LDP_KEY_DBL(adam_eps),
    LDP_KEY_INT(epochs_pretrain),
    LDP_KEY_INT(epochs_ata),
    LDP_KEY_INT(epochs_lpg),
    LDP_KEY_DBL(epoch_scale),
    LDP_KEY_DBL(epoch_frac),
    LDP_KEY_DBL(val_fraction),
    LDP_KEY_DBL(q),
    LDP_KEY_STR(mixture),
    LDP_KEY_INT(n_trials),
    LDP_KEY_INT(step_limit),
    LDP_KEY_INT(exec_horizon),
    LDP_KEY_STR(ablation),
    LDP_KEY_INT(bench_iters),
};

#undef LDP_KEY_U64
#undef LDP_KEY_INT
#undef LDP_KEY_DBL
#undef LDP_KEY_STR

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string value_to_string(const RunConfig& c, const KeyDesc& k) {
    switch (k.kind) {
        case Kind::U64: return std::to_string(c.*(k.u64_field));
        case Kind::Int: return std::to_string(c.*(k.int_field));
        case Kind::Double: return format_double(c.*(k.dbl_field));
        case Kind::Str: return c.*(k.str_field);
    }
    return {};
}

void parse_value(RunConfig& c, const KeyDesc& k, const std::string& raw) {
    try {
        switch (k.kind) {
            case Kind::U64:
                c.*(k.u64_field) = std::stoull(raw);
                return;
            case Kind::Int:
                c.*(k.int_field) = std::stoi(raw);
                return;
            case Kind::Double: {
                std::size_t used = 0;
                double v = std::stod(raw, &used);
                if (used != raw.size()) throw std::invalid_argument(raw);
                c.*(k.dbl_field) = v;
                return;
            }
            case Kind::Str:
                c.*(k.str_field) = raw;
                return;
        }
    } catch (const std::exception&) {
        throw ConfigError(std::string("config key '") + k.name + "': cannot parse value '" + raw + "'");
    }
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void require(bool ok, const std::string& key, const std::string& why) {
    if (!ok) throw ConfigError("config key '" + key + "': " + why);
}

}  // namespace

void RunConfig::validate() const {
    require(h >= 1, "h", "must be >= 1");
    require(d_z >= 1, "d_z", "must be >= 1");
    require(d_model >= 1, "d_model", "must be >= 1");
    require(n_heads >= 1, "n_heads", "must be >= 1");
    require(d_model % n_heads == 0, "n_heads", "must divide d_model");
    require(d_model % 2 == 0, "d_model", "must be even (sinusoidal embedding)");
    require(enc_layers >= 1, "enc_layers", "must be >= 1");
    require(dec_layers >= 1, "dec_layers", "must be >= 1");
    require(eps_layers >= 1, "eps_layers", "must be >= 1");
    require(mlp_depth >= 1, "mlp_depth", "must be >= 1");
    require(ff_mult >= 1, "ff_mult", "must be >= 1");
    require(d_img_feat >= 1, "d_img_feat", "must be >= 1");
    require(d_proprio >= 0, "d_proprio", "must be >= 0");
    require(text_hash_rows >= 1, "text_hash_rows", "must be >= 1");
    require(image_size >= 1, "image_size", "must be >= 1");
    require(d_action >= 0, "d_action", "must be >= 0");
    require(w >= 0.0, "w", "must be >= 0");
    require(T >= 1, "T", "must be >= 1");
    require(beta_start > 0.0 && beta_start < 1.0, "beta_start", "must be in (0,1)");
    require(beta_end > 0.0 && beta_end < 1.0, "beta_end", "must be in (0,1)");
    require(beta_start <= beta_end, "beta_end", "must be >= beta_start");
    require(schedule == "linear", "schedule", "unsupported kind (expected: linear)");
    require(sampler == "ddpm" || sampler == "ddim", "sampler", "must be ddpm or ddim");
    require(sampler_steps >= 1, "sampler_steps", "must be >= 1");
    require(sampler_steps <= T, "sampler_steps", "must be <= T");
    require(lr_peak > 0.0, "lr_peak", "must be > 0");
    require(warmup_steps >= 0, "warmup_steps", "must be >= 0");
    require(batch_size >= 1, "batch_size", "must be >= 1");
    require(grad_clip >= 0.0, "grad_clip", "must be >= 0 (0 disables clipping)");
    require(adam_beta1 >= 0.0 && adam_beta1 < 1.0, "adam_beta1", "must be in [0,1)");
    require(adam_beta2 >= 0.0 && adam_beta2 < 1.0, "adam_beta2", "must be in [0,1)");
    require(adam_eps > 0.0, "adam_eps", "must be > 0");
    require(epochs_pretrain >= 0, "epochs_pretrain", "must be >= 0");
    require(epochs_ata >= 1, "epochs_ata", "must be >= 1");
    require(epochs_lpg >= 1, "epochs_lpg", "must be >= 1");
    require(epoch_scale > 0.0, "epoch_scale", "must be > 0");
    require(epoch_frac > 0.0 && epoch_frac <= 1.0, "epoch_frac", "must be in (0,1]");
    require(val_fraction > 0.0 && val_fraction < 0.5, "val_fraction", "must be in (0,0.5)");
    require(q >= 0.0 && q < 0.5, "q", "must satisfy 0 <= q < 0.5");
    require(n_trials >= 1, "n_trials", "must be >= 1");
    require(step_limit >= 1, "step_limit", "must be >= 1");
    require(exec_horizon >= 0 && exec_horizon <= h, "exec_horizon", "must be in [0,h]");
    require(ablation == "full" || ablation == "non_diffusion_lpg" || ablation == "task_aware_ata" ||
                ablation == "obs_agnostic_ata" || ablation == "no_pretrain",
            "ablation", "unknown variant");
    require(bench_iters >= 1, "bench_iters", "must be >= 1");
    mixture_weights();  // validates syntax
}

std::string RunConfig::serialize() const {
    std::ostringstream out;
    for (const auto& k : kKeys) out << k.name << " = " << value_to_string(*this, k) << "\n";
    return out.str();
}

std::uint64_t RunConfig::hash() const {
    std::string s = serialize();
    return fnv1a(s.data(), s.size());
}

int RunConfig::resolved_threads() const {
    if (threads > 0) return threads;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

int RunConfig::scaled_epochs_ata() const {
    return std::max(1, static_cast<int>(std::lround(epochs_ata * epoch_scale)));
}

int RunConfig::scaled_epochs_lpg() const {
    return std::max(1, static_cast<int>(std::lround(epochs_lpg * epoch_scale)));
}

std::vector<std::pair<std::string, double>> RunConfig::mixture_weights() const {
    std::vector<std::pair<std::string, double>> out;
    if (mixture.empty()) return out;
    std::stringstream ss(mixture);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        auto colon = item.rfind(':');
        if (colon == std::string::npos)
            throw ConfigError("config key 'mixture': expected dataset_id:weight, got '" + item + "'");
        std::string id = trim(item.substr(0, colon));
        std::string wstr = trim(item.substr(colon + 1));
        double wv = 0.0;
        try {
            wv = std::stod(wstr);
        } catch (const std::exception&) {
            throw ConfigError("config key 'mixture': bad weight '" + wstr + "'");
        }
        if (id.empty()) throw ConfigError("config key 'mixture': empty dataset_id");
        if (wv < 0.0) throw ConfigError("config key 'mixture': weight must be >= 0");
        out.emplace_back(id, wv);
    }
    return out;
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        const KeyDesc* found = nullptr;
        for (const auto& k : kKeys)
            if (key == k.name) {
                found = &k;
                break;
            }
        if (!found) throw ConfigError("unknown config key '" + key + "'");
        parse_value(cfg, *found, value);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    if (!io::file_exists(path)) throw ConfigError("config file not found: " + path);
    return parse_config_text(io::read_text_file(path));
}

void save_config(const RunConfig& cfg, const std::string& path) {
    io::write_text_file(path, cfg.serialize());
}

std::vector<std::string> config_diff(const RunConfig& a, const RunConfig& b) {
    std::vector<std::string> out;
    for (const auto& k : kKeys)
        if (value_to_string(a, k) != value_to_string(b, k)) out.emplace_back(k.name);
    return out;
}

}  // namespace ldp
