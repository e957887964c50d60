#include "tnoma/nn/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tnoma::nn {

namespace {
constexpr double kPClamp = 1e-12;
constexpr double kLlrGradClip = 1e3;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

double clamp_p(double p) { return std::min(std::max(p, kPClamp), 1.0 - kPClamp); }
} // namespace

double llr_from_prob(double p) {
    const double q = clamp_p(p);
    return std::log(q / (1.0 - q));
}

LossResult ce_loss(const Tensor& p_hat, const Tensor& bits) {
    if (p_hat.numel() != bits.numel()) throw std::invalid_argument("ce_loss: shape mismatch");
    const double n = static_cast<double>(p_hat.numel());
    LossResult r;
    r.grad = Tensor::zeros(p_hat.shape);
    double acc = 0.0;
    for (std::size_t i = 0; i < p_hat.data.size(); ++i) {
        const double p = clamp_p(p_hat.data[i]);
        if (bits.data[i] > 0.0) {
            acc -= std::log(p);
            r.grad.data[i] = -1.0 / (n * p);
        } else {
            acc -= std::log(1.0 - p);
            r.grad.data[i] = 1.0 / (n * (1.0 - p));
        }
    }
    r.value = acc / n;
    return r;
}

LossResult ce_loss_mary(const Tensor& p_hat, const Tensor& labels) {
    if (p_hat.rank() != 3) throw std::invalid_argument("ce_loss_mary: expected [B, M, N]");
    const std::int64_t b_n = p_hat.dim(0), m_n = p_hat.dim(1), l = p_hat.dim(2);
    if (labels.numel() != b_n * l) throw std::invalid_argument("ce_loss_mary: labels shape mismatch");
    const double n = static_cast<double>(b_n * l);
    LossResult r;
    r.grad = Tensor::zeros(p_hat.shape);
    double acc = 0.0;
    for (std::int64_t b = 0; b < b_n; ++b)
        for (std::int64_t t = 0; t < l; ++t) {
            const auto m = static_cast<std::int64_t>(labels.data[static_cast<std::size_t>(b * l + t)]);
            if (m < 0 || m >= m_n) throw std::invalid_argument("ce_loss_mary: label out of range");
            const double p = clamp_p(p_hat.data[static_cast<std::size_t>((b * m_n + m) * l + t)]);
            acc -= std::log(p);
            r.grad.data[static_cast<std::size_t>((b * m_n + m) * l + t)] = -1.0 / (n * p);
        }
    r.value = acc / n;
    return r;
}

LossResult mse_loss(const Tensor& x_hat, const Tensor& target) {
    if (x_hat.numel() != target.numel()) throw std::invalid_argument("mse_loss: shape mismatch");
    const double n = static_cast<double>(x_hat.numel());
    LossResult r;
    r.grad = Tensor::zeros(x_hat.shape);
    double acc = 0.0;
    for (std::size_t i = 0; i < x_hat.data.size(); ++i) {
        const double d = x_hat.data[i] - target.data[i];
        acc += d * d;
        r.grad.data[i] = 2.0 * d / n;
    }
    r.value = acc / n;
    return r;
}

QLossResult q_loss(const Tensor& p_hat, const Tensor& bits, double kappa, bool clip_grad) {
    if (p_hat.numel() != bits.numel()) throw std::invalid_argument("q_loss: shape mismatch");
    if (!(kappa > 0.0)) throw std::invalid_argument("q_loss: kappa must be > 0");

    QLossResult r;
    r.grad = Tensor::zeros(p_hat.shape);

    const std::size_t n = p_hat.data.size();
    std::vector<double> llr(n);
    std::size_t cnt[2] = {0, 0};  // index 0: bit -1, index 1: bit +1
    double mean[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        llr[i] = llr_from_prob(p_hat.data[i]);
        const int cls = bits.data[i] > 0.0 ? 1 : 0;
        mean[cls] += llr[i];
        ++cnt[cls];
    }
    if (cnt[0] < 2 || cnt[1] < 2) {
        r.skipped = true;
        return r;
    }
    mean[0] /= static_cast<double>(cnt[0]);
    mean[1] /= static_cast<double>(cnt[1]);
    double var[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const int cls = bits.data[i] > 0.0 ? 1 : 0;
        const double d = llr[i] - mean[cls];
        var[cls] += d * d;
    }
    var[0] /= static_cast<double>(cnt[0]);
    var[1] /= static_cast<double>(cnt[1]);
    const double sigma[2] = {std::sqrt(var[0] + 1e-30), std::sqrt(var[1] + 1e-30)};

    // class -1 separates downward, so its argument is negated
    const double zeta[2] = {-1.0, 1.0};
    double value = 0.0;
    double dq_dratio[2];
    for (int cls = 0; cls < 2; ++cls) {
        const double ratio = zeta[cls] * mean[cls] / sigma[cls];
        value += 0.5 * 0.5 * std::erfc(kappa * ratio * 0.70710678118654752440084436210485);
        dq_dratio[cls] = 0.5 * (-kappa * kInvSqrt2Pi * std::exp(-0.5 * kappa * ratio * kappa * ratio));
    }
    r.value = value;
    r.mu_neg = mean[0];
    r.sigma_neg = sigma[0];
    r.mu_pos = mean[1];
    r.sigma_pos = sigma[1];

    for (std::size_t i = 0; i < n; ++i) {
        const int cls = bits.data[i] > 0.0 ? 1 : 0;
        const double ns = static_cast<double>(cnt[cls]);
        // d(mu/sigma)/dLLR_i over the class population
        const double dr = (1.0 / sigma[cls] -
                           mean[cls] * (llr[i] - mean[cls]) / (sigma[cls] * sigma[cls] * sigma[cls])) /
                          ns;
        double dllr_dp = 1.0 / (clamp_p(p_hat.data[i]) * (1.0 - clamp_p(p_hat.data[i])));
        if (clip_grad) dllr_dp = std::min(dllr_dp, kLlrGradClip);
        r.grad.data[i] = dq_dratio[cls] * zeta[cls] * dr * dllr_dp;
    }
    return r;
}

} // namespace tnoma::nn
