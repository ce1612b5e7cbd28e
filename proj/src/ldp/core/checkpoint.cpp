#include "ldp/core/checkpoint.hpp"

#include "ldp/core/log.hpp"
#include "ldp/core/rng.hpp"

#include <filesystem>

namespace ldp {

namespace {
constexpr char kMagic[9] = "LDPCKPT1";
constexpr char kEnd[5] = "END!";
constexpr std::uint8_t kSectionStore = 0;
constexpr std::uint8_t kSectionOptimizer = 1;
constexpr std::uint8_t kSectionBlob = 2;
}  // namespace

CheckpointWriter::CheckpointWriter(const std::string& path, const RunConfig& cfg,
                                   const std::string& kind, std::uint64_t step)
    : w_(path), path_(path), config_hash_(cfg.hash()) {
    w_.bytes(kMagic, 8);
    w_.u32(1);  // container version
    w_.str(kind);
    w_.u64(step);
    w_.str(cfg.serialize());
    w_.u64(config_hash_);
}

void CheckpointWriter::add_store(const std::string& name, const nn::ParamStore& store) {
    w_.u8(kSectionStore);
    w_.str(name);
    store.write(w_);
}

void CheckpointWriter::add_optimizer(const std::string& name, const nn::Adam& opt) {
    w_.u8(kSectionOptimizer);
    w_.str(name);
    opt.write(w_);
}

void CheckpointWriter::add_blob(const std::string& name, const std::string& bytes) {
    w_.u8(kSectionBlob);
    w_.str(name);
    w_.str(bytes);
}

SaveReceipt CheckpointWriter::finish() {
    w_.bytes(kEnd, 4);
    w_.close();
    SaveReceipt r;
    r.path = path_;
    r.config_hash = config_hash_;
    r.bytes = std::filesystem::file_size(path_);
    return r;
}

CheckpointReader::CheckpointReader(const std::string& path) {
    try {
        r_ = std::make_unique<io::BinReader>(path);
        char magic[8];
        r_->bytes(magic, 8);
        if (std::string(magic, 8) != std::string(kMagic, 8))
            throw CheckpointError("corrupt checkpoint (bad magic): " + path);
        std::uint32_t version = r_->u32();
        if (version != 1)
            throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
        kind_ = r_->str();
        step_ = r_->u64();
        std::string cfg_text = r_->str();
        config_ = parse_config_text(cfg_text);
        config_hash_ = r_->u64();
        if (config_.hash() != config_hash_)
            throw CheckpointError("corrupt checkpoint (config hash mismatch): " + path);
    } catch (const io::IoError& e) {
        throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
    }
}

bool CheckpointReader::check_config(const RunConfig& current) const {
    if (current.hash() == config_hash_) return true;
    auto diff = config_diff(current, config_);
    std::string keys;
    for (const auto& k : diff) keys += (keys.empty() ? "" : ", ") + k;
    log_line("[warn] checkpoint config differs from current run config (keys: " + keys +
             "); proceeding (cross-phase reuse)");
    return false;
}

void CheckpointReader::expect_section(std::uint8_t type, const std::string& name) {
    std::uint8_t t = r_->u8();
    if (t != type) throw CheckpointError("checkpoint section type mismatch at '" + name + "'");
    std::string n = r_->str();
    if (n != name)
        throw CheckpointError("checkpoint section name mismatch: expected '" + name + "', got '" + n + "'");
}

void CheckpointReader::read_store(const std::string& expect_name, nn::ParamStore& store) {
    try {
        expect_section(kSectionStore, expect_name);
        store.read(*r_);
    } catch (const io::IoError& e) {
        throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
    }
}

void CheckpointReader::read_optimizer(const std::string& expect_name, nn::Adam& opt) {
    try {
        expect_section(kSectionOptimizer, expect_name);
        opt.read(*r_);
    } catch (const io::IoError& e) {
        throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
    }
}

std::string CheckpointReader::read_blob(const std::string& expect_name) {
    try {
        expect_section(kSectionBlob, expect_name);
        return r_->str(1u << 30);
    } catch (const io::IoError& e) {
        throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
    }
}

void CheckpointReader::finish() {
    try {
        char end[4];
        r_->bytes(end, 4);
        if (std::string(end, 4) != std::string(kEnd, 4))
            throw CheckpointError("corrupt checkpoint (bad end marker)");
    } catch (const io::IoError& e) {
        throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
    }
}

}  // namespace ldp
