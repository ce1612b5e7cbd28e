#include "ldp/nn/optim.hpp"

#include "ldp/core/io_util.hpp"

#include <cmath>

namespace ldp::nn {

double LrSchedule::at(int step) const {
    if (warmup_steps > 0 && step < warmup_steps)
        return peak * static_cast<double>(step) / static_cast<double>(warmup_steps);
    if (total_steps <= warmup_steps) return peak;
    const double progress = static_cast<double>(step - warmup_steps) /
                            static_cast<double>(total_steps - warmup_steps);
    const double clamped = progress < 0.0 ? 0.0 : (progress > 1.0 ? 1.0 : progress);
    return peak * 0.5 * (1.0 + std::cos(3.14159265358979323846 * clamped));
}

Adam::Adam(TrainGroup group, AdamOpts opts) : group_(std::move(group)), opts_(opts) {
    m_ = group_.make_grads();
    v_ = group_.make_grads();
}

void Adam::step(std::vector<Mat>& grads, double lr) {
    if (opts_.grad_clip > 0.0) {
        double sq = 0.0;
        for (const auto& g : grads) sq += g.squaredNorm();
        const double norm = std::sqrt(sq);
        if (norm > opts_.grad_clip) {
            const double s = opts_.grad_clip / norm;
            for (auto& g : grads) g *= s;
        }
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(opts_.beta1, t_);
    const double bc2 = 1.0 - std::pow(opts_.beta2, t_);
    for (std::size_t i = 0; i < group_.items.size(); ++i) {
        Mat& g = grads[i];
        m_[i] = opts_.beta1 * m_[i] + (1.0 - opts_.beta1) * g;
        v_[i] = opts_.beta2 * v_[i] + (1.0 - opts_.beta2) * g.cwiseProduct(g);
        Mat mhat = m_[i] / bc1;
        Mat vhat = v_[i] / bc2;
        group_.items[i]->value.array() -=
            lr * mhat.array() / (vhat.array().sqrt() + opts_.eps);
    }
}

void Adam::write(io::BinWriter& w) const {
    w.u32(static_cast<std::uint32_t>(group_.items.size()));
    w.u32(static_cast<std::uint32_t>(t_));
    for (std::size_t i = 0; i < group_.items.size(); ++i) {
        w.str(group_.items[i]->name);
        w.f64_array(m_[i].data(), static_cast<std::size_t>(m_[i].size()));
        w.f64_array(v_[i].data(), static_cast<std::size_t>(v_[i].size()));
    }
}

void Adam::read(io::BinReader& r) {
    std::uint32_t n = r.u32();
    if (n != group_.items.size()) throw io::IoError("optimizer state count mismatch");
    t_ = static_cast<int>(r.u32());
    for (std::size_t i = 0; i < n; ++i) {
        std::string name = r.str();
        if (name != group_.items[i]->name) throw io::IoError("optimizer state name mismatch: " + name);
        r.f64_array(m_[i].data(), static_cast<std::size_t>(m_[i].size()));
        r.f64_array(v_[i].data(), static_cast<std::size_t>(v_[i].size()));
    }
}

}  // namespace ldp::nn
