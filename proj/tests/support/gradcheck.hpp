#pragma once

#include "ldp/nn/tape.hpp"

#include <functional>
#include <string>

namespace ldp::test {

struct GradCheckReport {
    double max_rel_err = 0.0;
    std::string worst_param;
    std::size_t checked = 0;
};

// Central-difference oracle: perturbs every scalar of every parameter in the
// group and compares (L(+h)-L(-h))/2h against the supplied analytic
// gradients. loss_fn must be a deterministic function of the current
// parameter values (freeze any sampling noise before calling).
inline GradCheckReport finite_diff_check(nn::TrainGroup& group,
                                         const std::function<double()>& loss_fn,
                                         const std::vector<Mat>& analytic,
                                         double fd_step = 1e-5) {
    GradCheckReport rep;
    for (std::size_t pi = 0; pi < group.items.size(); ++pi) {
        nn::Param& p = *group.items[pi];
        for (int j = 0; j < p.value.cols(); ++j) {
            for (int i = 0; i < p.value.rows(); ++i) {
                const double saved = p.value(i, j);
                p.value(i, j) = saved + fd_step;
                const double lp = loss_fn();
                p.value(i, j) = saved - fd_step;
                const double lm = loss_fn();
                p.value(i, j) = saved;
                const double gfd = (lp - lm) / (2.0 * fd_step);
                const double ga = analytic[pi](i, j);
                const double denom = std::max(1e-6, std::abs(ga) + std::abs(gfd));
                const double rel = std::abs(ga - gfd) / denom;
                ++rep.checked;
                if (rel > rep.max_rel_err) {
                    rep.max_rel_err = rel;
                    rep.worst_param = p.name + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
                }
            }
        }
    }
    return rep;
}

}  // namespace ldp::test
