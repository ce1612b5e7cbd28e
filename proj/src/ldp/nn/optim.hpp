#pragma once

#include "ldp/nn/tape.hpp"

namespace ldp::io {
class BinWriter;
class BinReader;
}

namespace ldp::nn {

// Linear warmup to peak, then cosine decay to zero over the remaining steps.
struct LrSchedule {
    double peak = 1e-4;
    int warmup_steps = 1000;
    int total_steps = 0;  // 0 = warmup only, hold peak afterwards

    double at(int step) const;
};

struct AdamOpts {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double grad_clip = 1.0;  // global-norm clip; 0 disables
};

class Adam {
public:
    Adam(TrainGroup group, AdamOpts opts);

    // Applies one update with the given learning rate. Gradients are
    // clipped by global norm (across all tensors) if configured.
    void step(std::vector<Mat>& grads, double lr);

    int steps_taken() const { return t_; }
    const TrainGroup& group() const { return group_; }

    void write(io::BinWriter& w) const;
    void read(io::BinReader& r);

private:
    TrainGroup group_;
    AdamOpts opts_;
    std::vector<Mat> m_, v_;
    int t_ = 0;
};

}  // namespace ldp::nn
