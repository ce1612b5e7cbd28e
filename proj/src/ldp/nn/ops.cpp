#include "ldp/nn/ops.hpp"

#include <cmath>

namespace ldp::nn::ops {

Mat linear_fwd(const Mat& x, const Mat& w, const Mat& b) {
    Mat y = x * w;
    y.rowwise() += b.row(0);
    return y;
}

void linear_bwd(const Mat& dy, const Mat& x, const Mat& w, Mat& dx, Mat& dw, Mat& db) {
    dx = dy * w.transpose();
    dw = x.transpose() * dy;
    db = dy.colwise().sum();
}

void softmax_rows_inplace(Mat& m) {
    for (int i = 0; i < m.rows(); ++i) {
        double mx = m.row(i).maxCoeff();
        m.row(i) = (m.row(i).array() - mx).exp();
        m.row(i) /= m.row(i).sum();
    }
}

Mat attention_fwd(const Mat& xq, const Mat& xm, const Mat& wq, const Mat& wk, const Mat& wv,
                  const Mat& wo, int batch, int sq, int sm, int heads, AttnCache* cache) {
    const int d = static_cast<int>(wq.cols());
    const int dh = d / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    Mat q = xq * wq;
    Mat k = xm * wk;
    Mat v = xm * wv;
    Mat o = Mat::Zero(q.rows(), d);
    std::vector<Mat> probs(static_cast<std::size_t>(batch) * heads);

    for (int b = 0; b < batch; ++b) {
        for (int h = 0; h < heads; ++h) {
            auto qb = q.block(b * sq, h * dh, sq, dh);
            auto kb = k.block(b * sm, h * dh, sm, dh);
            auto vb = v.block(b * sm, h * dh, sm, dh);
            Mat scores = scale * (qb * kb.transpose());
            softmax_rows_inplace(scores);
            o.block(b * sq, h * dh, sq, dh) = scores * vb;
            probs[static_cast<std::size_t>(b) * heads + h] = std::move(scores);
        }
    }
    Mat y = o * wo;
    if (cache) {
        cache->q = std::move(q);
        cache->k = std::move(k);
        cache->v = std::move(v);
        cache->o = std::move(o);
        cache->probs = std::move(probs);
    }
    return y;
}

void attention_bwd(const Mat& dy, const Mat& xq, const Mat& xm, const Mat& wq, const Mat& wk,
                   const Mat& wv, const Mat& wo, int batch, int sq, int sm, int heads,
                   const AttnCache& cache, Mat& dxq, Mat& dxm, Mat& dwq, Mat& dwk, Mat& dwv,
                   Mat& dwo) {
    const int d = static_cast<int>(wq.cols());
    const int dh = d / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    dwo = cache.o.transpose() * dy;
    Mat do_ = dy * wo.transpose();

    Mat dq = Mat::Zero(cache.q.rows(), d);
    Mat dk = Mat::Zero(cache.k.rows(), d);
    Mat dv = Mat::Zero(cache.v.rows(), d);

    for (int b = 0; b < batch; ++b) {
        for (int h = 0; h < heads; ++h) {
            const Mat& a = cache.probs[static_cast<std::size_t>(b) * heads + h];
            auto qb = cache.q.block(b * sq, h * dh, sq, dh);
            auto kb = cache.k.block(b * sm, h * dh, sm, dh);
            auto vb = cache.v.block(b * sm, h * dh, sm, dh);
            auto dob = do_.block(b * sq, h * dh, sq, dh);

            Mat da = dob * vb.transpose();                       // sq x sm
            dv.block(b * sm, h * dh, sm, dh) += a.transpose() * dob;
            // softmax backward, rowwise
            Vec rowdot = (da.array() * a.array()).rowwise().sum();
            Mat ds = (da.colwise() - rowdot).array() * a.array();
            dq.block(b * sq, h * dh, sq, dh) = scale * (ds * kb);
            dk.block(b * sm, h * dh, sm, dh) += scale * (ds.transpose() * qb);
        }
    }

    dwq = xq.transpose() * dq;
    dwk = xm.transpose() * dk;
    dwv = xm.transpose() * dv;
    dxq = dq * wq.transpose();
    dxm = dk * wk.transpose() + dv * wv.transpose();
}

Mat layernorm_fwd(const Mat& x, const Mat& gamma, const Mat& beta, double eps,
                  LayerNormCache* cache) {
    const int rows = static_cast<int>(x.rows());
    const int cols = static_cast<int>(x.cols());
    Mat xhat(rows, cols);
    Vec inv_std(rows);
    for (int i = 0; i < rows; ++i) {
        double mu = x.row(i).mean();
        double var = (x.row(i).array() - mu).square().mean();
        double is = 1.0 / std::sqrt(var + eps);
        xhat.row(i) = (x.row(i).array() - mu) * is;
        inv_std(i) = is;
    }
    Mat y = xhat.array().rowwise() * gamma.row(0).array();
    y.rowwise() += beta.row(0);
    if (cache) {
        cache->xhat = std::move(xhat);
        cache->inv_std = std::move(inv_std);
    }
    return y;
}

void layernorm_bwd(const Mat& dy, const Mat& gamma, const LayerNormCache& cache, Mat& dx,
                   Mat& dgamma, Mat& dbeta) {
    const Mat& xhat = cache.xhat;
    const int rows = static_cast<int>(dy.rows());
    const int cols = static_cast<int>(dy.cols());

    dgamma = (dy.array() * xhat.array()).colwise().sum();
    dbeta = dy.colwise().sum();

    dx.resize(rows, cols);
    for (int i = 0; i < rows; ++i) {
        Eigen::RowVectorXd dxhat = dy.row(i).array() * gamma.row(0).array();
        double m1 = dxhat.mean();
        double m2 = (dxhat.array() * xhat.row(i).array()).mean();
        dx.row(i) = cache.inv_std(i) * (dxhat.array() - m1 - xhat.row(i).array() * m2);
    }
}

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

inline double norm_cdf(double x) { return 0.5 * (1.0 + std::erf(x * kInvSqrt2)); }
inline double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }
}

Mat gelu_fwd(const Mat& x) {
    return x.unaryExpr([](double v) { return v * norm_cdf(v); });
}

Mat gelu_grad(const Mat& x) {
    return x.unaryExpr([](double v) { return norm_cdf(v) + v * norm_pdf(v); });
}

}  // namespace ldp::nn::ops
