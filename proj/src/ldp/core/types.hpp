#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ldp {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// RGB image, values in [0,1], row-major (y, x, channel).
struct Image {
    int height = 0;
    int width = 0;
    std::vector<float> rgb;  // height*width*3

    Image() = default;
    Image(int h, int w) : height(h), width(w), rgb(static_cast<std::size_t>(h) * w * 3, 0.f) {}

    float& at(int y, int x, int c) { return rgb[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
    float at(int y, int x, int c) const { return rgb[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
};

// A fixed-horizon block of normalized actions. `values` is h x d_a with every
// entry in [-1,1]; pad_mask is a prefix of real steps followed by padding
// (repeated last action). `dim_valid` marks which of the canonical action
// dimensions exist on the source embodiment (narrower embodiments are
// zero-padded up to the mixture's canonical width).
struct ActionChunk {
    Mat values;                        // h x d_a
    int horizon = 0;                   // h
    int action_dim = 0;                // d_a (canonical width)
    std::vector<std::uint8_t> pad_mask;   // length h, 1 = real step
    std::vector<std::uint8_t> dim_valid;  // length d_a, 1 = native dimension

    int real_steps() const {
        int n = 0;
        for (auto m : pad_mask) n += m ? 1 : 0;
        return n;
    }
    void validate() const;
};

// One timestep's observation: camera views, optional robot state, embodiment
// identity and the task instruction. Proprio is absent during pre-training.
struct ObservationFrame {
    std::vector<std::pair<std::string, Image>> images;  // (view_id, image)
    std::optional<Vec> proprio;
    std::string embodiment_id;
    std::string task_instruction;

    void validate() const {
        if (images.empty()) throw DomainError("ObservationFrame: at least one view required");
    }
};

// Diagonal-Gaussian latent (mean, stddev, one sample).
struct LatentVariable {
    Vec mu;
    Vec sigma;  // strictly positive elementwise
    Vec sample;
};

struct EvalTaskResult {
    std::string task_id;
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;
    double mean_episode_len = 0.0;
};

}  // namespace ldp
