#pragma once

#include "ldp/nn/tape.hpp"

namespace ldp::nn {

// Model forwards are written once, templated on a context. TapeCtx records
// the graph for backprop; InferCtx evaluates the same expressions directly.
// Both route through ops:: so results are bit-identical.

struct TapeCtx {
    using V = Var;
    Tape& t;

    explicit TapeCtx(Tape& tape) : t(tape) {}

    V leaf(Mat m) { return t.leaf(std::move(m)); }
    V param(Param& p) { return t.param(p); }
    const Mat& val(V v) const { return t.val(v); }

    V linear(V x, V w, V b) { return t.linear(x, w, b); }
    V matmul(V a, V b) { return t.matmul(a, b); }
    V add(V a, V b) { return t.add(a, b); }
    V sub(V a, V b) { return t.sub(a, b); }
    V scale(V a, double s) { return t.scale(a, s); }
    V add_scaled(V a, V b, double s) { return t.add_scaled(a, b, s); }
    V cmul(V a, V b) { return t.cmul(a, b); }
    V tanh_op(V a) { return t.tanh_op(a); }
    V gelu(V a) { return t.gelu(a); }
    V exp_op(V a) { return t.exp_op(a); }
    V clamp(V a, double lo, double hi) { return t.clamp(a, lo, hi); }
    V layernorm(V x, V g, V b, double eps = 1e-5) { return t.layernorm(x, g, b, eps); }
    V self_attention(V x, V wq, V wk, V wv, V wo, int batch, int seq, int heads) {
        return t.self_attention(x, wq, wk, wv, wo, batch, seq, heads);
    }
    V cross_attention(V xq, V xm, V wq, V wk, V wv, V wo, int batch, int sq, int sm, int heads) {
        return t.cross_attention(xq, xm, wq, wk, wv, wo, batch, sq, sm, heads);
    }
    V slice_cols(V x, int c0, int n) { return t.slice_cols(x, c0, n); }
    V gather_rows(V x, std::vector<int> rows) { return t.gather_rows(x, std::move(rows)); }
    V tile_block(V x, int n) { return t.tile_block(x, n); }
    V compose_rows(int total, std::vector<std::pair<V, std::vector<int>>> parts) {
        return t.compose_rows(total, std::move(parts));
    }
    V weighted_sse(V pred, Mat target, Mat weights, double denom) {
        return t.weighted_sse(pred, std::move(target), std::move(weights), denom);
    }
    V kl_gaussian(V mu, V logvar) { return t.kl_gaussian(mu, logvar); }
    V mean_all(V a) { return t.mean_all(a); }
};

struct InferCtx {
    using V = Mat;

    V leaf(Mat m) { return m; }
    V param(Param& p) { return p.value; }
    const Mat& val(const V& v) const { return v; }

    V linear(const V& x, const V& w, const V& b) { return ops::linear_fwd(x, w, b); }
    V matmul(const V& a, const V& b) { return a * b; }
    V add(const V& a, const V& b) { return a + b; }
    V sub(const V& a, const V& b) { return a - b; }
    V scale(const V& a, double s) { return a * s; }
    V add_scaled(const V& a, const V& b, double s) { return a + s * b; }
    V cmul(const V& a, const V& b) { return a.cwiseProduct(b); }
    V tanh_op(const V& a) { return a.array().tanh().matrix(); }
    V gelu(const V& a) { return ops::gelu_fwd(a); }
    V exp_op(const V& a) { return a.array().exp().matrix(); }
    V clamp(const V& a, double lo, double hi) { return a.cwiseMax(lo).cwiseMin(hi); }
    V layernorm(const V& x, const V& g, const V& b, double eps = 1e-5) {
        return ops::layernorm_fwd(x, g, b, eps, nullptr);
    }
    V self_attention(const V& x, const V& wq, const V& wk, const V& wv, const V& wo, int batch,
                     int seq, int heads) {
        return ops::attention_fwd(x, x, wq, wk, wv, wo, batch, seq, seq, heads, nullptr);
    }
    V cross_attention(const V& xq, const V& xm, const V& wq, const V& wk, const V& wv,
                      const V& wo, int batch, int sq, int sm, int heads) {
        return ops::attention_fwd(xq, xm, wq, wk, wv, wo, batch, sq, sm, heads, nullptr);
    }
    V slice_cols(const V& x, int c0, int n) { return x.middleCols(c0, n); }
    V gather_rows(const V& x, const std::vector<int>& rows) {
        Mat out(static_cast<int>(rows.size()), x.cols());
        for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<int>(r)) = x.row(rows[r]);
        return out;
    }
    V tile_block(const V& x, int n) {
        Mat out(x.rows() * n, x.cols());
        for (int k = 0; k < n; ++k) out.middleRows(k * static_cast<int>(x.rows()), x.rows()) = x;
        return out;
    }
    V compose_rows(int total, const std::vector<std::pair<V, std::vector<int>>>& parts) {
        Mat out = Mat::Zero(total, parts.at(0).first.cols());
        for (const auto& [src, idx] : parts)
            for (std::size_t r = 0; r < idx.size(); ++r) out.row(idx[r]) = src.row(static_cast<int>(r));
        return out;
    }
    V weighted_sse(const V& pred, const Mat& target, const Mat& weights, double denom) {
        Mat out(1, 1);
        out(0, 0) = (weights.array() * (pred - target).array().square()).sum() / denom;
        return out;
    }
    V kl_gaussian(const V& mu, const V& lv) {
        Mat out(1, 1);
        out(0, 0) = 0.5 * (mu.array().square() + lv.array().exp() - 1.0 - lv.array()).sum() /
                    static_cast<double>(mu.rows());
        return out;
    }
    V mean_all(const V& a) {
        Mat out(1, 1);
        out(0, 0) = a.mean();
        return out;
    }
};

}  // namespace ldp::nn
