#include "ldp/nn/params.hpp"

#include "ldp/core/io_util.hpp"
#include "ldp/core/rng.hpp"

#include <stdexcept>

namespace ldp::nn {

Param& ParamStore::create(const std::string& name, int rows, int cols, bool trainable) {
    if (by_name_.count(name)) throw std::runtime_error("duplicate parameter name: " + name);
    auto p = std::make_unique<Param>();
    p->name = name;
    p->value = Mat::Zero(rows, cols);
    p->trainable = trainable;
    p->index = static_cast<int>(params_.size());
    Param& ref = *p;
    by_name_[name] = p.get();
    params_.push_back(std::move(p));
    return ref;
}

Param& ParamStore::get(const std::string& name) {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw std::runtime_error("unknown parameter: " + name);
    return *it->second;
}

const Param& ParamStore::get(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw std::runtime_error("unknown parameter: " + name);
    return *it->second;
}

std::size_t ParamStore::num_scalars(bool trainable_only) const {
    std::size_t n = 0;
    for (const auto& p : params_)
        if (!trainable_only || p->trainable) n += static_cast<std::size_t>(p->value.size());
    return n;
}

std::uint64_t ParamStore::checksum() const {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& p : params_) {
        h = fnv1a(p->name.data(), p->name.size(), h);
        std::uint64_t shape[2] = {static_cast<std::uint64_t>(p->value.rows()),
                                  static_cast<std::uint64_t>(p->value.cols())};
        h = fnv1a(shape, sizeof(shape), h);
        h = fnv1a(p->value.data(), sizeof(double) * p->value.size(), h);
    }
    return h;
}

std::vector<Mat> ParamStore::make_grad_buffer() const {
    std::vector<Mat> g;
    g.reserve(params_.size());
    for (const auto& p : params_) g.emplace_back(Mat::Zero(p->value.rows(), p->value.cols()));
    return g;
}

void ParamStore::write(io::BinWriter& w) const {
    w.u32(static_cast<std::uint32_t>(params_.size()));
    for (const auto& p : params_) {
        w.str(p->name);
        w.u32(static_cast<std::uint32_t>(p->value.rows()));
        w.u32(static_cast<std::uint32_t>(p->value.cols()));
        w.u8(p->trainable ? 1 : 0);
        w.f64_array(p->value.data(), static_cast<std::size_t>(p->value.size()));
    }
}

void ParamStore::read(io::BinReader& r) {
    std::uint32_t n = r.u32();
    if (n != params_.size())
        throw io::IoError("parameter count mismatch while loading store");
    for (std::uint32_t i = 0; i < n; ++i) {
        std::string name = r.str();
        std::uint32_t rows = r.u32();
        std::uint32_t cols = r.u32();
        r.u8();  // trainable flag is structural, not data; ignore stored copy
        Param& p = get(name);
        if (p.value.rows() != static_cast<int>(rows) || p.value.cols() != static_cast<int>(cols))
            throw io::IoError("parameter shape mismatch for " + name);
        r.f64_array(p.value.data(), static_cast<std::size_t>(p.value.size()));
    }
}

}  // namespace ldp::nn
