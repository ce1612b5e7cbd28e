#include "ldp/nn/tape.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace ldp::nn {

Var Tape::leaf(Mat v) { return Var{push(std::move(v))}; }

Var Tape::param(Param& p) {
    auto it = lease_index_.find(&p);
    if (it != lease_index_.end()) return Var{it->second};
    int i = push(p.value);
    leases_.emplace_back(&p, i);
    lease_index_[&p] = i;
    return Var{i};
}

const Mat& Tape::grad(Var v) const {
    const Node& n = nodes_[v.i];
    if (n.grad.size() == 0) {
        const_cast<Tape*>(this)->zero_ = Mat::Zero(n.val.rows(), n.val.cols());
        return zero_;
    }
    return n.grad;
}

Var Tape::linear(Var x, Var w, Var b) {
    int i = push(ops::linear_fwd(nodes_[x.i].val, nodes_[w.i].val, nodes_[b.i].val));
    nodes_[i].back = [this, i, x, w, b] {
        Mat dx, dw, db;
        ops::linear_bwd(nodes_[i].grad, nodes_[x.i].val, nodes_[w.i].val, dx, dw, db);
        grad_acc(x.i) += dx;
        grad_acc(w.i) += dw;
        grad_acc(b.i) += db;
    };
    return Var{i};
}

Var Tape::matmul(Var a, Var b) {
    int i = push(nodes_[a.i].val * nodes_[b.i].val);
    nodes_[i].back = [this, i, a, b] {
        const Mat& g = nodes_[i].grad;
        grad_acc(a.i) += g * nodes_[b.i].val.transpose();
        grad_acc(b.i) += nodes_[a.i].val.transpose() * g;
    };
    return Var{i};
}

Var Tape::add(Var a, Var b) {
    int i = push(nodes_[a.i].val + nodes_[b.i].val);
    nodes_[i].back = [this, i, a, b] {
        grad_acc(a.i) += nodes_[i].grad;
        grad_acc(b.i) += nodes_[i].grad;
    };
    return Var{i};
}

Var Tape::sub(Var a, Var b) {
    int i = push(nodes_[a.i].val - nodes_[b.i].val);
    nodes_[i].back = [this, i, a, b] {
        grad_acc(a.i) += nodes_[i].grad;
        grad_acc(b.i) -= nodes_[i].grad;
    };
    return Var{i};
}

Var Tape::scale(Var a, double s) {
    int i = push(nodes_[a.i].val * s);
    nodes_[i].back = [this, i, a, s] { grad_acc(a.i) += s * nodes_[i].grad; };
    return Var{i};
}

Var Tape::add_scaled(Var a, Var b, double s) {
    int i = push(nodes_[a.i].val + s * nodes_[b.i].val);
    nodes_[i].back = [this, i, a, b, s] {
        grad_acc(a.i) += nodes_[i].grad;
        grad_acc(b.i) += s * nodes_[i].grad;
    };
    return Var{i};
}

Var Tape::cmul(Var a, Var b) {
    int i = push(nodes_[a.i].val.cwiseProduct(nodes_[b.i].val));
    nodes_[i].back = [this, i, a, b] {
        grad_acc(a.i) += nodes_[i].grad.cwiseProduct(nodes_[b.i].val);
        grad_acc(b.i) += nodes_[i].grad.cwiseProduct(nodes_[a.i].val);
    };
    return Var{i};
}

Var Tape::tanh_op(Var a) {
    int i = push(nodes_[a.i].val.array().tanh().matrix());
    nodes_[i].back = [this, i, a] {
        const Mat& y = nodes_[i].val;
        grad_acc(a.i) += (nodes_[i].grad.array() * (1.0 - y.array().square())).matrix();
    };
    return Var{i};
}

Var Tape::gelu(Var a) {
    int i = push(ops::gelu_fwd(nodes_[a.i].val));
    nodes_[i].back = [this, i, a] {
        grad_acc(a.i) +=
            (nodes_[i].grad.array() * ops::gelu_grad(nodes_[a.i].val).array()).matrix();
    };
    return Var{i};
}

Var Tape::exp_op(Var a) {
    int i = push(nodes_[a.i].val.array().exp().matrix());
    nodes_[i].back = [this, i, a] {
        grad_acc(a.i) += (nodes_[i].grad.array() * nodes_[i].val.array()).matrix();
    };
    return Var{i};
}

Var Tape::clamp(Var a, double lo, double hi) {
    int i = push(nodes_[a.i].val.cwiseMax(lo).cwiseMin(hi));
    nodes_[i].back = [this, i, a, lo, hi] {
        const Mat& x = nodes_[a.i].val;
        Mat mask = ((x.array() >= lo) && (x.array() <= hi)).cast<double>();
        grad_acc(a.i) += nodes_[i].grad.cwiseProduct(mask);
    };
    return Var{i};
}

Var Tape::layernorm(Var x, Var gamma, Var beta, double eps) {
    auto cache = std::make_shared<ops::LayerNormCache>();
    int i = push(ops::layernorm_fwd(nodes_[x.i].val, nodes_[gamma.i].val, nodes_[beta.i].val,
                                    eps, cache.get()));
    nodes_[i].back = [this, i, x, gamma, beta, cache] {
        Mat dx, dgamma, dbeta;
        ops::layernorm_bwd(nodes_[i].grad, nodes_[gamma.i].val, *cache, dx, dgamma, dbeta);
        grad_acc(x.i) += dx;
        grad_acc(gamma.i) += dgamma;
        grad_acc(beta.i) += dbeta;
    };
    return Var{i};
}

Var Tape::self_attention(Var x, Var wq, Var wk, Var wv, Var wo, int batch, int seq, int heads) {
    auto cache = std::make_shared<ops::AttnCache>();
    int i = push(ops::attention_fwd(nodes_[x.i].val, nodes_[x.i].val, nodes_[wq.i].val,
                                    nodes_[wk.i].val, nodes_[wv.i].val, nodes_[wo.i].val, batch,
                                    seq, seq, heads, cache.get()));
    nodes_[i].back = [this, i, x, wq, wk, wv, wo, batch, seq, heads, cache] {
        Mat dxq, dxm, dwq, dwk, dwv, dwo;
        ops::attention_bwd(nodes_[i].grad, nodes_[x.i].val, nodes_[x.i].val, nodes_[wq.i].val,
                           nodes_[wk.i].val, nodes_[wv.i].val, nodes_[wo.i].val, batch, seq, seq,
                           heads, *cache, dxq, dxm, dwq, dwk, dwv, dwo);
        grad_acc(x.i) += dxq + dxm;
        grad_acc(wq.i) += dwq;
        grad_acc(wk.i) += dwk;
        grad_acc(wv.i) += dwv;
        grad_acc(wo.i) += dwo;
    };
    return Var{i};
}

Var Tape::cross_attention(Var xq, Var xm, Var wq, Var wk, Var wv, Var wo, int batch, int sq,
                          int sm, int heads) {
    auto cache = std::make_shared<ops::AttnCache>();
    int i = push(ops::attention_fwd(nodes_[xq.i].val, nodes_[xm.i].val, nodes_[wq.i].val,
                                    nodes_[wk.i].val, nodes_[wv.i].val, nodes_[wo.i].val, batch,
                                    sq, sm, heads, cache.get()));
    nodes_[i].back = [this, i, xq, xm, wq, wk, wv, wo, batch, sq, sm, heads, cache] {
        Mat dxq, dxm, dwq, dwk, dwv, dwo;
        ops::attention_bwd(nodes_[i].grad, nodes_[xq.i].val, nodes_[xm.i].val, nodes_[wq.i].val,
                           nodes_[wk.i].val, nodes_[wv.i].val, nodes_[wo.i].val, batch, sq, sm,
                           heads, *cache, dxq, dxm, dwq, dwk, dwv, dwo);
        grad_acc(xq.i) += dxq;
        grad_acc(xm.i) += dxm;
        grad_acc(wq.i) += dwq;
        grad_acc(wk.i) += dwk;
        grad_acc(wv.i) += dwv;
        grad_acc(wo.i) += dwo;
    };
    return Var{i};
}

Var Tape::slice_cols(Var x, int c0, int n) {
    int i = push(nodes_[x.i].val.middleCols(c0, n));
    nodes_[i].back = [this, i, x, c0, n] {
        grad_acc(x.i).middleCols(c0, n) += nodes_[i].grad;
    };
    return Var{i};
}

Var Tape::gather_rows(Var x, std::vector<int> rows) {
    Mat out(static_cast<int>(rows.size()), nodes_[x.i].val.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<int>(r)) = nodes_[x.i].val.row(rows[r]);
    int i = push(std::move(out));
    auto idx = std::make_shared<std::vector<int>>(std::move(rows));
    nodes_[i].back = [this, i, x, idx] {
        Mat& gx = grad_acc(x.i);
        const Mat& g = nodes_[i].grad;
        for (std::size_t r = 0; r < idx->size(); ++r) gx.row((*idx)[r]) += g.row(static_cast<int>(r));
    };
    return Var{i};
}

Var Tape::tile_block(Var x, int n) {
    const Mat& v = nodes_[x.i].val;
    const int r = static_cast<int>(v.rows());
    Mat out(r * n, v.cols());
    for (int k = 0; k < n; ++k) out.middleRows(k * r, r) = v;
    int i = push(std::move(out));
    nodes_[i].back = [this, i, x, n, r] {
        Mat& gx = grad_acc(x.i);
        const Mat& g = nodes_[i].grad;
        for (int k = 0; k < n; ++k) gx += g.middleRows(k * r, r);
    };
    return Var{i};
}

Var Tape::compose_rows(int total_rows, std::vector<std::pair<Var, std::vector<int>>> parts) {
    if (parts.empty()) throw std::runtime_error("compose_rows: no parts");
    const auto cols = nodes_[parts[0].first.i].val.cols();
    Mat out = Mat::Zero(total_rows, cols);
    for (auto& [v, idx] : parts) {
        const Mat& src = nodes_[v.i].val;
        for (std::size_t r = 0; r < idx.size(); ++r) out.row(idx[r]) = src.row(static_cast<int>(r));
    }
    int i = push(std::move(out));
    auto parts_sp = std::make_shared<std::vector<std::pair<Var, std::vector<int>>>>(std::move(parts));
    nodes_[i].back = [this, i, parts_sp] {
        const Mat& g = nodes_[i].grad;
        for (auto& [v, idx] : *parts_sp) {
            Mat& gv = grad_acc(v.i);
            for (std::size_t r = 0; r < idx.size(); ++r) gv.row(static_cast<int>(r)) += g.row(idx[r]);
        }
    };
    return Var{i};
}

Var Tape::weighted_sse(Var pred, Mat target, Mat weights, double denom) {
    const Mat& p = nodes_[pred.i].val;
    Mat diff = p - target;
    double v = (weights.array() * diff.array().square()).sum() / denom;
    Mat out(1, 1);
    out(0, 0) = v;
    int i = push(std::move(out));
    auto diff_sp = std::make_shared<Mat>(std::move(diff));
    auto w_sp = std::make_shared<Mat>(std::move(weights));
    nodes_[i].back = [this, i, pred, diff_sp, w_sp, denom] {
        double g = nodes_[i].grad(0, 0);
        grad_acc(pred.i) +=
            (2.0 * g / denom) * (w_sp->array() * diff_sp->array()).matrix();
    };
    return Var{i};
}

Var Tape::kl_gaussian(Var mu, Var logvar) {
    const Mat& m = nodes_[mu.i].val;
    const Mat& lv = nodes_[logvar.i].val;
    const double batch = static_cast<double>(m.rows());
    double v = 0.5 * (m.array().square() + lv.array().exp() - 1.0 - lv.array()).sum() / batch;
    Mat out(1, 1);
    out(0, 0) = v;
    int i = push(std::move(out));
    nodes_[i].back = [this, i, mu, logvar, batch] {
        double g = nodes_[i].grad(0, 0) / batch;
        grad_acc(mu.i) += g * nodes_[mu.i].val;
        grad_acc(logvar.i) +=
            (0.5 * g) * (nodes_[logvar.i].val.array().exp() - 1.0).matrix();
    };
    return Var{i};
}

Var Tape::mean_all(Var a) {
    const Mat& v = nodes_[a.i].val;
    Mat out(1, 1);
    out(0, 0) = v.mean();
    int i = push(std::move(out));
    const double n = static_cast<double>(v.size());
    nodes_[i].back = [this, i, a, n] {
        grad_acc(a.i).array() += nodes_[i].grad(0, 0) / n;
    };
    return Var{i};
}

void Tape::backward(Var root) {
    Node& r = nodes_[root.i];
    if (r.val.rows() != 1 || r.val.cols() != 1)
        throw std::runtime_error("backward root must be scalar");
    grad_acc(root.i)(0, 0) = 1.0;
    for (int i = root.i; i >= 0; --i) {
        Node& n = nodes_[i];
        if (n.grad.size() != 0 && n.back) n.back();
    }
}

void Tape::collect_grads(const TrainGroup& group, std::vector<Mat>& out) const {
    for (const auto& [p, node] : leases_) {
        auto it = group.index.find(p);
        if (it == group.index.end()) continue;
        const Mat& g = nodes_[node].grad;
        if (g.size() != 0) out[it->second] += g;
    }
}

}  // namespace ldp::nn
