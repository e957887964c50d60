#ifndef TNOMA_NN_LAYERS_HPP
#define TNOMA_NN_LAYERS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tnoma/common/rng.hpp"
#include "tnoma/nn/tensor.hpp"

namespace tnoma::nn {

// Layers own their parameters and the activations their backward pass needs.
// A layer instance is exclusively owned during one forward/backward pair.
// Convolutions are zero-bias ('same' padding, odd kernels); batch norm
// supplies the shifts.

// FIR filter bank: x [B, C_in, L] -> y [B, C_out, L], weight [C_out, C_in, S].
class Conv1dBank {
public:
    Conv1dBank(int c_in, int c_out, int kernel_len, common::Rng& init);

    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);

    Tensor weight;
    std::uint64_t macs = 0;

private:
    int c_in_, c_out_, s_;
    Tensor x_pad_;  // cached padded input
    std::int64_t len_ = 0, batch_ = 0;
};

// First decoder stage: 2-row (real/imag) kernels over C_in complex channels.
// x [B, C_in, 2, L] -> y [B, C_out, L], weight [C_out, C_in, 2, S]; the row
// dimension is consumed by the kernel and the per-bank outputs are summed.
class Conv2dFirst {
public:
    Conv2dFirst(int c_in, int c_out, int kernel_len, common::Rng& init);

    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);

    Tensor weight;
    std::uint64_t macs = 0;

private:
    int c_in_, c_out_, s_;
    Tensor x_pad_;
    std::int64_t len_ = 0, batch_ = 0;
};

// Fully connected layer with bias: x [B, in] -> y [B, out].
class Linear {
public:
    Linear(int in, int out, common::Rng& init);

    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);

    Tensor weight;  // [out, in]
    Tensor bias;    // [out]
    std::uint64_t macs = 0;

private:
    int in_, out_;
    Tensor x_;
};

// Per-channel batch normalization over (batch, length) with running stats
// for inference (momentum 0.1, eps 1e-5). x [B, C, L] or [B, C].
class BatchNorm {
public:
    explicit BatchNorm(int channels);

    Tensor forward(const Tensor& x, bool training);
    Tensor backward(const Tensor& dy);

    Tensor gamma, beta;
    std::vector<double> running_mean, running_var;
    double momentum = 0.1;
    double eps = 1e-5;

private:
    int c_;
    Tensor xhat_;
    std::vector<double> inv_std_;
    std::int64_t nb_ = 0;  // samples per channel in the last training batch
    bool trained_pass_ = false;
};

// Elementwise activations; forward caches what backward needs.
enum class Act { Selu, HSwish, Sigmoid, Tanh, Identity };

class Activation {
public:
    explicit Activation(Act kind) : kind_(kind) {}
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);
    Act kind() const { return kind_; }

private:
    Act kind_;
    Tensor x_, y_;
};

double selu(double x);
double hswish(double x);

// Softmax over dim 1. x [B, M] or [B, M, L].
class SoftmaxChannel {
public:
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);

private:
    Tensor y_;
};

// Channel reduction: [B, C, L] -> [B, 1, L].
class ChannelSum {
public:
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);

private:
    std::int64_t c_ = 0;
};

// Trainable scalar bypass: out = x + a * skip (a initialized to zero, so a
// freshly wired connection leaves the serial network unchanged).
class ScalarSkip {
public:
    ScalarSkip();
    Tensor forward(const Tensor& x, const Tensor& skip);
    // returns dx; d_skip retrievable afterwards
    Tensor backward(const Tensor& dy);
    const Tensor& skip_grad() const { return d_skip_; }

    Tensor a;  // [1]

private:
    Tensor skip_, d_skip_;
};

// Zero-mean power normalization: per user k of every frame, center the
// sequence and scale it so sum_n v[n]^2 / N equals the allocated power.
// u [B, K, N], powers [B, K] -> v [B, K, N]; gradients flow to both inputs.
class PowerNorm {
public:
    Tensor forward(const Tensor& u, const Tensor& powers);
    Tensor backward(const Tensor& dv);  // returns du
    const Tensor& powers_grad() const { return d_powers_; }

private:
    Tensor w_, v_, powers_, d_powers_;
    std::vector<double> scale_, wss_;
};

// Kaiming-style fan-in Gaussian init shared by the layers above.
void init_gaussian(Tensor& t, double fan_in, common::Rng& rng);

} // namespace tnoma::nn

#endif
