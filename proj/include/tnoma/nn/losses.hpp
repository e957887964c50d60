#ifndef TNOMA_NN_LOSSES_HPP
#define TNOMA_NN_LOSSES_HPP

#include "tnoma/nn/tensor.hpp"

namespace tnoma::nn {

struct LossResult {
    double value = 0.0;
    Tensor grad;  // with respect to the prediction input
};

// Binary cross-entropy averaged over every estimate in the batch.
// p_hat holds P(bit = +1); bits are +/-1. Probabilities are clamped to
// [1e-12, 1 - 1e-12] before the logs.
LossResult ce_loss(const Tensor& p_hat, const Tensor& bits);

// M-ary cross-entropy for the softmax head: p_hat [B, M, N], labels [B, N].
LossResult ce_loss_mary(const Tensor& p_hat, const Tensor& labels);

// Mean squared error averaged over every estimate.
LossResult mse_loss(const Tensor& x_hat, const Tensor& target);

// Detection-error surrogate built from class-conditional LLR statistics:
//   J = 1/2 * sum_s Q(kappa * |separation|_s / sigma_s)
// with the per-class means/variances taken over the mini-batch (each class
// normalized by its own count). The backward pass chains through the LLR
// mapping dLLR/dp = 1/(p(1-p)), optionally clipped at 1e3.
struct QLossResult {
    double value = 0.0;
    Tensor grad;
    bool skipped = false;  // one class missing (or too small): caller falls back to CE alone
    double mu_pos = 0.0, sigma_pos = 0.0;
    double mu_neg = 0.0, sigma_neg = 0.0;
};
QLossResult q_loss(const Tensor& p_hat, const Tensor& bits, double kappa, bool clip_grad = true);

inline double combined_loss(double ce, double q, double alpha) { return ce + alpha * q; }

// log(p / (1 - p)) with the same clamping as the losses above.
double llr_from_prob(double p);

} // namespace tnoma::nn

#endif
