#pragma once

#include "ldp/core/types.hpp"

#include <vector>

namespace ldp::nn::ops {

// Shared forward math used by both the autodiff tape and the tape-free
// inference context, so the two paths are numerically identical.

Mat linear_fwd(const Mat& x, const Mat& w, const Mat& b);  // b is 1 x out
void linear_bwd(const Mat& dy, const Mat& x, const Mat& w, Mat& dx, Mat& dw, Mat& db);

void softmax_rows_inplace(Mat& m);

struct AttnCache {
    Mat q, k, v, o;
    std::vector<Mat> probs;  // indexed b*heads + h
};

// Multi-head attention over row-stacked sequences: xq is (B*Sq) x d, xm is
// (B*Sm) x d. Self-attention passes the same matrix for both.
Mat attention_fwd(const Mat& xq, const Mat& xm, const Mat& wq, const Mat& wk, const Mat& wv,
                  const Mat& wo, int batch, int sq, int sm, int heads, AttnCache* cache);

void attention_bwd(const Mat& dy, const Mat& xq, const Mat& xm, const Mat& wq, const Mat& wk,
                   const Mat& wv, const Mat& wo, int batch, int sq, int sm, int heads,
                   const AttnCache& cache, Mat& dxq, Mat& dxm, Mat& dwq, Mat& dwk, Mat& dwv,
                   Mat& dwo);

struct LayerNormCache {
    Mat xhat;
    Vec inv_std;
};

Mat layernorm_fwd(const Mat& x, const Mat& gamma, const Mat& beta, double eps,
                  LayerNormCache* cache);
void layernorm_bwd(const Mat& dy, const Mat& gamma, const LayerNormCache& cache, Mat& dx,
                   Mat& dgamma, Mat& dbeta);

Mat gelu_fwd(const Mat& x);
Mat gelu_grad(const Mat& x);  // elementwise dy/dx

}  // namespace ldp::nn::ops
