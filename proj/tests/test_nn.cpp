#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ldp/nn/ctx.hpp"
#include "ldp/nn/transformer.hpp"
#include "support/gradcheck.hpp"

using namespace ldp;
using ldp::Mat;

namespace {

// Small mixed graph exercising every op the models use.
struct ToyNet {
    nn::ParamStore store;
    nn::EncoderStack enc;
    nn::DecoderStack dec;
    nn::Mlp mlp;
    nn::Param *w_in, *b_in, *gamma, *beta, *cls;
    Mat x_tokens;   // (B*S) x d input
    Mat x_mlp;      // B x d_in
    Mat target;     // (B*S) x d
    Mat weights;    // same shape as target
    Mat kl_eps;     // B x dz, frozen noise
    int B = 2, S = 3, d = 8, heads = 2, dz = 4;

    ToyNet() {
        auto rng = seeded_rng(11, "toynet");
        enc.build(store, "enc", d, heads, 2, 2, rng);
        dec.build(store, "dec", d, heads, 2, 1, rng);
        mlp.build(store, "mlp", 5, 8, d, 3, rng);
        w_in = &store.create("w_in", d, 2 * dz);
        nn::init_xavier(*w_in, rng);
        b_in = &store.create("b_in", 1, 2 * dz);
        nn::init_normal(*b_in, 0.1, rng);
        gamma = &store.create("gamma", 1, d);
        nn::init_ones(*gamma);
        beta = &store.create("beta", 1, d);
        cls = &store.create("cls", 1, d);
        nn::init_normal(*cls, 0.5, rng);

        x_tokens = Mat::NullaryExpr(B * S, d, [&](Eigen::Index, Eigen::Index) { return rng.normal(); });
        x_mlp = Mat::NullaryExpr(B, 5, [&](Eigen::Index, Eigen::Index) { return rng.normal(); });
        target = Mat::NullaryExpr(B * S, d, [&](Eigen::Index, Eigen::Index) { return rng.normal(); });
        weights = Mat::NullaryExpr(B * S, d, [&](Eigen::Index, Eigen::Index) { return rng.uniform01() < 0.3 ? 0.0 : 1.0; });
        kl_eps = Mat::NullaryExpr(B, dz, [&](Eigen::Index, Eigen::Index) { return rng.normal(); });
    }

    template <class Ctx>
    typename Ctx::V loss(Ctx& c) {
        auto x = c.leaf(x_tokens);
        // splice a tiled cls row and an MLP-produced row set together
        auto clsv = c.tile_block(c.param(*cls), B);           // B x d
        auto mlp_out = mlp.forward(c, c.leaf(x_mlp));         // B x d
        std::vector<int> cls_rows, mlp_rows, tok_rows;
        for (int b = 0; b < B; ++b) {
            cls_rows.push_back(b * (S + 2));
            mlp_rows.push_back(b * (S + 2) + 1);
            for (int s = 0; s < S; ++s) tok_rows.push_back(b * (S + 2) + 2 + s);
        }
        auto seq = c.compose_rows(B * (S + 2), {{clsv, cls_rows}, {mlp_out, mlp_rows}, {x, tok_rows}});
        auto e = enc.forward(c, seq, B, S + 2);
        auto mem = c.gather_rows(e, cls_rows);                // B x d
        auto dq = c.tanh_op(c.leaf(x_tokens));
        auto dec_out = dec.forward(c, dq, mem, B, S, 1);      // (B*S) x d
        auto recon = c.weighted_sse(dec_out, target, weights, weights.sum());

        auto head = c.linear(mem, c.param(*w_in), c.param(*b_in));  // B x 2dz
        auto mu = c.slice_cols(head, 0, dz);
        auto lv = c.clamp(c.slice_cols(head, dz, dz), -10.0, 10.0);
        auto sigma = c.exp_op(c.scale(lv, 0.5));
        auto z = c.add(mu, c.cmul(sigma, c.leaf(kl_eps)));
        auto znorm = c.layernorm(z, c.param(*gamma), c.param(*beta));
        auto zloss = c.weighted_sse(znorm, Mat::Zero(B, dz), Mat::Ones(B, dz), B);
        (void)zloss;
        auto kl = c.kl_gaussian(mu, lv);
        auto total = c.add_scaled(recon, kl, 0.01);
        total = c.add_scaled(total, zloss, 0.5);
        return total;
    }

    double eval() {
        nn::InferCtx c;
        return loss(c)(0, 0);
    }
};

}  // namespace

TEST_CASE("tape gradients match central finite differences on a mixed graph") {
    ToyNet net;
    nn::TrainGroup group;
    group.add_store(net.store);

    nn::Tape tape;
    nn::TapeCtx c(tape);
    auto root = net.loss(c);
    tape.backward(root);
    auto grads = group.make_grads();
    tape.collect_grads(group, grads);

    auto rep = test::finite_diff_check(group, [&] { return net.eval(); }, grads, 1e-5);
    INFO("worst: ", rep.worst_param, " rel: ", rep.max_rel_err, " checked: ", rep.checked);
    CHECK(rep.max_rel_err < 1e-4);
    CHECK(rep.checked == group.num_scalars());
}

TEST_CASE("tape forward and inference context produce identical values") {
    ToyNet net;
    nn::Tape tape;
    nn::TapeCtx tc(tape);
    auto root = net.loss(tc);
    double tape_val = tape.val(root)(0, 0);
    double infer_val = net.eval();
    CHECK(tape_val == infer_val);  // bit-identical shared kernels
}

TEST_CASE("backward through reused parameter accumulates both paths") {
    nn::ParamStore store;
    auto rng = seeded_rng(3, "reuse");
    auto& w = store.create("w", 4, 4);
    nn::init_xavier(w, rng);
    Mat x = Mat::NullaryExpr(2, 4, [&](Eigen::Index, Eigen::Index) { return rng.normal(); });

    nn::TrainGroup group;
    group.add_store(store);

    auto eval = [&] {
        nn::InferCtx c;
        Mat y = c.matmul(c.matmul(c.leaf(x), c.param(w)), c.param(w));
        return c.weighted_sse(y, Mat::Zero(2, 4), Mat::Ones(2, 4), 8.0)(0, 0);
    };

    nn::Tape tape;
    nn::TapeCtx c(tape);
    auto y = tape.matmul(tape.matmul(tape.leaf(x), tape.param(w)), tape.param(w));
    auto root = tape.weighted_sse(y, Mat::Zero(2, 4), Mat::Ones(2, 4), 8.0);
    tape.backward(root);
    auto grads = group.make_grads();
    tape.collect_grads(group, grads);

    auto rep = test::finite_diff_check(group, eval, grads, 1e-5);
    CHECK(rep.max_rel_err < 1e-7);
}
