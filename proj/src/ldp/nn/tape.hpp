#pragma once

#include "ldp/nn/ops.hpp"
#include "ldp/nn/params.hpp"

#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace ldp::nn {

// Trainable parameters gathered for one optimization problem, possibly drawn
// from several stores. Order of add() calls fixes gradient-buffer order.
struct TrainGroup {
    std::vector<Param*> items;
    std::map<const Param*, int> index;

    void add(Param& p) {
        if (index.count(&p)) return;
        index[&p] = static_cast<int>(items.size());
        items.push_back(&p);
    }
    void add_store(ParamStore& s) {
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.at(i).trainable) add(s.at(i));
    }
    std::vector<Mat> make_grads() const {
        std::vector<Mat> g;
        g.reserve(items.size());
        for (auto* p : items) g.emplace_back(Mat::Zero(p->value.rows(), p->value.cols()));
        return g;
    }
    std::size_t num_scalars() const {
        std::size_t n = 0;
        for (auto* p : items) n += static_cast<std::size_t>(p->value.size());
        return n;
    }
};

// Reverse-mode autodiff over dense matrices. A fresh tape is built per batch;
// ops are batched (attention handles all sequences of a batch in one node) so
// graphs stay small. Backward accumulates into per-node grads, which are
// harvested into TrainGroup-aligned buffers.
class Tape {
public:
    struct Var {
        int i = -1;
        bool valid() const { return i >= 0; }
    };

    Var leaf(Mat v);
    Var param(Param& p);  // repeated leases of the same param return one leaf

    const Mat& val(Var v) const { return nodes_[v.i].val; }
    const Mat& grad(Var v) const;
    bool has_grad(Var v) const { return nodes_[v.i].grad.size() > 0; }

    Var linear(Var x, Var w, Var b);
    Var matmul(Var a, Var b);
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var scale(Var a, double s);
    Var add_scaled(Var a, Var b, double s);  // a + s*b
    Var cmul(Var a, Var b);
    Var tanh_op(Var a);
    Var gelu(Var a);
    Var exp_op(Var a);
    Var clamp(Var a, double lo, double hi);
    Var layernorm(Var x, Var gamma, Var beta, double eps = 1e-5);
    Var self_attention(Var x, Var wq, Var wk, Var wv, Var wo, int batch, int seq, int heads);
    Var cross_attention(Var xq, Var xm, Var wq, Var wk, Var wv, Var wo, int batch, int sq,
                        int sm, int heads);
    Var slice_cols(Var x, int c0, int n);
    Var gather_rows(Var x, std::vector<int> rows);
    Var tile_block(Var x, int n);
    Var compose_rows(int total_rows, std::vector<std::pair<Var, std::vector<int>>> parts);

    // sum(weights .* (pred - target).^2) / denom, 1x1 output
    Var weighted_sse(Var pred, Mat target, Mat weights, double denom);
    // rowwise 0.5*sum(mu^2 + exp(lv) - 1 - lv), averaged over rows; 1x1 output
    Var kl_gaussian(Var mu, Var logvar);
    Var mean_all(Var a);

    void backward(Var root);
    void collect_grads(const TrainGroup& group, std::vector<Mat>& out) const;

    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        Mat val;
        Mat grad;
        std::function<void()> back;
    };

    std::vector<Node> nodes_;
    std::vector<std::pair<Param*, int>> leases_;
    std::map<const Param*, int> lease_index_;
    Mat zero_;

    int push(Mat v) {
        nodes_.push_back(Node{std::move(v), Mat(), nullptr});
        return static_cast<int>(nodes_.size() - 1);
    }
    Mat& grad_acc(int i) {
        Node& n = nodes_[i];
        if (n.grad.size() == 0) n.grad = Mat::Zero(n.val.rows(), n.val.cols());
        return n.grad;
    }
};

using Var = Tape::Var;

}  // namespace ldp::nn
