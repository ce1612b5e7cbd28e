#include "ldp/nn/transformer.hpp"

#include <cmath>

namespace ldp::nn {

void init_xavier(Param& p, RngStream& rng) {
    const double stddev = std::sqrt(2.0 / static_cast<double>(p.value.rows() + p.value.cols()));
    for (int j = 0; j < p.value.cols(); ++j)
        for (int i = 0; i < p.value.rows(); ++i) p.value(i, j) = stddev * rng.normal();
}

void init_normal(Param& p, double stddev, RngStream& rng) {
    for (int j = 0; j < p.value.cols(); ++j)
        for (int i = 0; i < p.value.rows(); ++i) p.value(i, j) = stddev * rng.normal();
}

void init_ones(Param& p) { p.value.setOnes(); }

namespace {

Param* attn_w(ParamStore& s, const std::string& name, int d, RngStream& rng) {
    Param& p = s.create(name, d, d);
    init_xavier(p, rng);
    return &p;
}

Param* ln_gamma(ParamStore& s, const std::string& name, int d) {
    Param& p = s.create(name, 1, d);
    init_ones(p);
    return &p;
}

Param* ln_beta(ParamStore& s, const std::string& name, int d) { return &s.create(name, 1, d); }

}  // namespace

void EncoderStack::build(ParamStore& store, const std::string& prefix, int d_model, int heads,
                         int ff_mult, int layers, RngStream& rng) {
    heads_ = heads;
    const int d_ff = d_model * ff_mult;
    for (int l = 0; l < layers; ++l) {
        std::string p = prefix + ".l" + std::to_string(l);
        Layer lay{};
        lay.wq = attn_w(store, p + ".wq", d_model, rng);
        lay.wk = attn_w(store, p + ".wk", d_model, rng);
        lay.wv = attn_w(store, p + ".wv", d_model, rng);
        lay.wo = attn_w(store, p + ".wo", d_model, rng);
        lay.ln1_g = ln_gamma(store, p + ".ln1.g", d_model);
        lay.ln1_b = ln_beta(store, p + ".ln1.b", d_model);
        lay.ln2_g = ln_gamma(store, p + ".ln2.g", d_model);
        lay.ln2_b = ln_beta(store, p + ".ln2.b", d_model);
        lay.ff_w1 = &store.create(p + ".ff.w1", d_model, d_ff);
        init_xavier(*lay.ff_w1, rng);
        lay.ff_b1 = &store.create(p + ".ff.b1", 1, d_ff);
        lay.ff_w2 = &store.create(p + ".ff.w2", d_ff, d_model);
        init_xavier(*lay.ff_w2, rng);
        lay.ff_b2 = &store.create(p + ".ff.b2", 1, d_model);
        layers_.push_back(lay);
    }
    final_g_ = ln_gamma(store, prefix + ".final.g", d_model);
    final_b_ = ln_beta(store, prefix + ".final.b", d_model);
}

void DecoderStack::build(ParamStore& store, const std::string& prefix, int d_model, int heads,
                         int ff_mult, int layers, RngStream& rng) {
    heads_ = heads;
    const int d_ff = d_model * ff_mult;
    for (int l = 0; l < layers; ++l) {
        std::string p = prefix + ".l" + std::to_string(l);
        Layer lay{};
        lay.sq = attn_w(store, p + ".self.wq", d_model, rng);
        lay.sk = attn_w(store, p + ".self.wk", d_model, rng);
        lay.sv = attn_w(store, p + ".self.wv", d_model, rng);
        lay.so = attn_w(store, p + ".self.wo", d_model, rng);
        lay.cq = attn_w(store, p + ".cross.wq", d_model, rng);
        lay.ck = attn_w(store, p + ".cross.wk", d_model, rng);
        lay.cv = attn_w(store, p + ".cross.wv", d_model, rng);
        lay.co = attn_w(store, p + ".cross.wo", d_model, rng);
        lay.ln1_g = ln_gamma(store, p + ".ln1.g", d_model);
        lay.ln1_b = ln_beta(store, p + ".ln1.b", d_model);
        lay.ln2_g = ln_gamma(store, p + ".ln2.g", d_model);
        lay.ln2_b = ln_beta(store, p + ".ln2.b", d_model);
        lay.ln3_g = ln_gamma(store, p + ".ln3.g", d_model);
        lay.ln3_b = ln_beta(store, p + ".ln3.b", d_model);
        lay.ff_w1 = &store.create(p + ".ff.w1", d_model, d_ff);
        init_xavier(*lay.ff_w1, rng);
        lay.ff_b1 = &store.create(p + ".ff.b1", 1, d_ff);
        lay.ff_w2 = &store.create(p + ".ff.w2", d_ff, d_model);
        init_xavier(*lay.ff_w2, rng);
        lay.ff_b2 = &store.create(p + ".ff.b2", 1, d_model);
        layers_.push_back(lay);
    }
    final_g_ = ln_gamma(store, prefix + ".final.g", d_model);
    final_b_ = ln_beta(store, prefix + ".final.b", d_model);
}

void Mlp::build(ParamStore& store, const std::string& prefix, int d_in, int d_hidden, int d_out,
                int depth, RngStream& rng) {
    int in = d_in;
    for (int l = 0; l < depth; ++l) {
        const int out = (l == depth - 1) ? d_out : d_hidden;
        Param& w = store.create(prefix + ".w" + std::to_string(l), in, out);
        init_xavier(w, rng);
        ws_.push_back(&w);
        bs_.push_back(&store.create(prefix + ".b" + std::to_string(l), 1, out));
        in = out;
    }
}

}  // namespace ldp::nn
