#pragma once

#include "ldp/core/rng.hpp"
#include "ldp/nn/ctx.hpp"

#include <string>

namespace ldp::nn {

void init_xavier(Param& p, RngStream& rng);
void init_normal(Param& p, double stddev, RngStream& rng);
void init_ones(Param& p);

// Pre-LN transformer encoder stack: x += MHA(LN(x)); x += FFN(LN(x)); final LN.
class EncoderStack {
public:
    void build(ParamStore& store, const std::string& prefix, int d_model, int heads, int ff_mult,
               int layers, RngStream& rng);

    template <class Ctx>
    typename Ctx::V forward(Ctx& c, typename Ctx::V x, int batch, int seq) const {
        for (const auto& l : layers_) {
            auto h = c.layernorm(x, c.param(*l.ln1_g), c.param(*l.ln1_b));
            h = c.self_attention(h, c.param(*l.wq), c.param(*l.wk), c.param(*l.wv),
                                 c.param(*l.wo), batch, seq, heads_);
            x = c.add(x, h);
            auto f = c.layernorm(x, c.param(*l.ln2_g), c.param(*l.ln2_b));
            f = c.linear(f, c.param(*l.ff_w1), c.param(*l.ff_b1));
            f = c.gelu(f);
            f = c.linear(f, c.param(*l.ff_w2), c.param(*l.ff_b2));
            x = c.add(x, f);
        }
        return c.layernorm(x, c.param(*final_g_), c.param(*final_b_));
    }

    int depth() const { return static_cast<int>(layers_.size()); }

private:
    struct Layer {
        Param *wq, *wk, *wv, *wo;
        Param *ln1_g, *ln1_b, *ln2_g, *ln2_b;
        Param *ff_w1, *ff_b1, *ff_w2, *ff_b2;
    };
    std::vector<Layer> layers_;
    Param *final_g_ = nullptr, *final_b_ = nullptr;
    int heads_ = 0;
};

// Pre-LN transformer decoder stack with cross-attention to a fixed memory:
// x += Self(LN(x)); x += Cross(LN(x), mem); x += FFN(LN(x)); final LN.
class DecoderStack {
public:
    void build(ParamStore& store, const std::string& prefix, int d_model, int heads, int ff_mult,
               int layers, RngStream& rng);

    template <class Ctx>
    typename Ctx::V forward(Ctx& c, typename Ctx::V x, typename Ctx::V memory, int batch,
                            int seq, int mem_seq) const {
        for (const auto& l : layers_) {
            auto h = c.layernorm(x, c.param(*l.ln1_g), c.param(*l.ln1_b));
            h = c.self_attention(h, c.param(*l.sq), c.param(*l.sk), c.param(*l.sv),
                                 c.param(*l.so), batch, seq, heads_);
            x = c.add(x, h);
            auto q = c.layernorm(x, c.param(*l.ln2_g), c.param(*l.ln2_b));
            q = c.cross_attention(q, memory, c.param(*l.cq), c.param(*l.ck), c.param(*l.cv),
                                  c.param(*l.co), batch, seq, mem_seq, heads_);
            x = c.add(x, q);
            auto f = c.layernorm(x, c.param(*l.ln3_g), c.param(*l.ln3_b));
            f = c.linear(f, c.param(*l.ff_w1), c.param(*l.ff_b1));
            f = c.gelu(f);
            f = c.linear(f, c.param(*l.ff_w2), c.param(*l.ff_b2));
            x = c.add(x, f);
        }
        return c.layernorm(x, c.param(*final_g_), c.param(*final_b_));
    }

    int depth() const { return static_cast<int>(layers_.size()); }

private:
    struct Layer {
        Param *sq, *sk, *sv, *so;
        Param *cq, *ck, *cv, *co;
        Param *ln1_g, *ln1_b, *ln2_g, *ln2_b, *ln3_g, *ln3_b;
        Param *ff_w1, *ff_b1, *ff_w2, *ff_b2;
    };
    std::vector<Layer> layers_;
    Param *final_g_ = nullptr, *final_b_ = nullptr;
    int heads_ = 0;
};

// Plain MLP with GELU between layers (no activation after the last).
class Mlp {
public:
    void build(ParamStore& store, const std::string& prefix, int d_in, int d_hidden, int d_out,
               int depth, RngStream& rng);

    template <class Ctx>
    typename Ctx::V forward(Ctx& c, typename Ctx::V x) const {
        for (std::size_t i = 0; i < ws_.size(); ++i) {
            x = c.linear(x, c.param(*ws_[i]), c.param(*bs_[i]));
            if (i + 1 < ws_.size()) x = c.gelu(x);
        }
        return x;
    }

private:
    std::vector<Param*> ws_, bs_;
};

}  // namespace ldp::nn
