#pragma once

#include "ldp/core/types.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace ldp::io {
class BinWriter;
class BinReader;
}

namespace ldp::nn {

struct Param {
    std::string name;
    Mat value;
    bool trainable = true;
    int index = -1;  // position in owning store
};

// Ordered, named parameter registry. Creation order is the canonical order
// for gradient buffers, optimizer state, and serialization.
class ParamStore {
public:
    Param& create(const std::string& name, int rows, int cols, bool trainable = true);
    Param& get(const std::string& name);
    const Param& get(const std::string& name) const;
    bool has(const std::string& name) const { return by_name_.count(name) != 0; }

    std::size_t size() const { return params_.size(); }
    Param& at(std::size_t i) { return *params_[i]; }
    const Param& at(std::size_t i) const { return *params_[i]; }

    std::size_t num_scalars(bool trainable_only = false) const;

    // Content checksum over parameter names, shapes and raw values.
    std::uint64_t checksum() const;

    // Gradient buffer aligned with store order (zero matrices).
    std::vector<Mat> make_grad_buffer() const;

    void write(io::BinWriter& w) const;
    // Loads values into an identically-structured store (names and shapes
    // must match); throws on mismatch.
    void read(io::BinReader& r);

private:
    std::vector<std::unique_ptr<Param>> params_;
    std::map<std::string, Param*> by_name_;
};

}  // namespace ldp::nn
