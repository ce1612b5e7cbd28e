#pragma once

#include "ldp/core/config.hpp"
#include "ldp/core/io_util.hpp"
#include "ldp/nn/optim.hpp"
#include "ldp/nn/params.hpp"

#include <cstdint>
#include <memory>
#include <string>

namespace ldp {

struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SaveReceipt {
    std::string path;
    std::uint64_t config_hash = 0;
    std::uint64_t bytes = 0;
};

// Versioned binary container: header (kind, step, resolved config echo and
// hash) followed by named sections (parameter stores, optimizer states,
// opaque blobs) in a fixed per-kind order, closed by an end marker so
// truncation is always detected. Round trips are bit-exact on parameters.
class CheckpointWriter {
public:
    CheckpointWriter(const std::string& path, const RunConfig& cfg, const std::string& kind,
                     std::uint64_t step);
    void add_store(const std::string& name, const nn::ParamStore& store);
    void add_optimizer(const std::string& name, const nn::Adam& opt);
    void add_blob(const std::string& name, const std::string& bytes);
    SaveReceipt finish();

private:
    io::BinWriter w_;
    std::string path_;
    std::uint64_t config_hash_;
};

class CheckpointReader {
public:
    explicit CheckpointReader(const std::string& path);

    const RunConfig& config() const { return config_; }
    const std::string& kind() const { return kind_; }
    std::uint64_t step() const { return step_; }
    std::uint64_t config_hash() const { return config_hash_; }

    // Emits a warning (returns false) when the embedded config hash differs
    // from `current`; intended for cross-phase reuse such as loading
    // pre-training weights into a fine-tune run.
    bool check_config(const RunConfig& current) const;

    void read_store(const std::string& expect_name, nn::ParamStore& store);
    void read_optimizer(const std::string& expect_name, nn::Adam& opt);
    std::string read_blob(const std::string& expect_name);
    void finish();  // verifies the end marker

private:
    std::unique_ptr<io::BinReader> r_;
    RunConfig config_;
    std::string kind_;
    std::uint64_t step_ = 0;
    std::uint64_t config_hash_ = 0;

    void expect_section(std::uint8_t type, const std::string& name);
};

}  // namespace ldp
