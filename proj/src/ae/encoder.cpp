#include "tnoma/ae/encoder.hpp"

#include <stdexcept>

namespace tnoma::ae {

using nn::Tensor;

Tensor interleave_frame(const Tensor& x) {
    if (x.rank() != 3) throw std::invalid_argument("interleave_frame: expected [B, K, N]");
    const std::int64_t b_n = x.dim(0), k_n = x.dim(1), n = x.dim(2);
    Tensor t = Tensor::zeros({b_n, 1, k_n * n});
    for (std::int64_t b = 0; b < b_n; ++b)
        for (std::int64_t k = 0; k < k_n; ++k) {
            const double* src = x.data.data() + (b * k_n + k) * n;
            double* dst = t.data.data() + b * k_n * n;
            for (std::int64_t i = 0; i < n; ++i) dst[i * k_n + k] = src[i];
        }
    return t;
}

Tensor deinterleave_frame(const Tensor& t, int k_users) {
    if (t.rank() != 3 || t.dim(1) != 1) throw std::invalid_argument("deinterleave_frame: expected [B, 1, K*N]");
    const std::int64_t b_n = t.dim(0);
    const std::int64_t kn = t.dim(2);
    const std::int64_t n = kn / k_users;
    Tensor x = Tensor::zeros({b_n, k_users, n});
    for (std::int64_t b = 0; b < b_n; ++b)
        for (std::int64_t k = 0; k < k_users; ++k) {
            const double* src = t.data.data() + b * kn;
            double* dst = x.data.data() + (b * k_users + k) * n;
            for (std::int64_t i = 0; i < n; ++i) dst[i] = src[i * k_users + k];
        }
    return x;
}

Encoder::Encoder(const AeVariant& variant, int k_users, bool skip_a, common::Rng& init)
    : k_users_(k_users), skip_a_(skip_a) {
    for (int i = 0; i < 3; ++i) {
        conv_.push_back(std::make_unique<nn::Conv1dBank>(1, variant.encoder_filters[static_cast<std::size_t>(i)],
                                                         variant.kernel_len, init));
        if (i < 2) {
            act_.push_back(std::make_unique<nn::Activation>(nn::Act::Selu));
            bn_.push_back(std::make_unique<nn::BatchNorm>(variant.encoder_filters[static_cast<std::size_t>(i)]));
        }
    }
    sum_.resize(3);
}

Tensor Encoder::forward(const Tensor& bits, const Tensor& powers, bool training) {
    if (bits.rank() != 3 || bits.dim(1) != k_users_) throw std::invalid_argument("Encoder: expected bits [B, K, N]");
    n_symbols_ = bits.dim(2);
    Tensor t = interleave_frame(bits);
    t = sum_[0].forward(bn_[0]->forward(act_[0]->forward(conv_[0]->forward(t)), training));
    s1_ = t;
    t = sum_[1].forward(bn_[1]->forward(act_[1]->forward(conv_[1]->forward(t)), training));
    if (skip_a_) t = skip_.forward(t, s1_);
    t = sum_[2].forward(conv_[2]->forward(t));
    Tensor u = deinterleave_frame(t, k_users_);
    return norm_.forward(u, powers);
}

Tensor Encoder::backward(const Tensor& dv) {
    Tensor du = norm_.backward(dv);
    Tensor dt = interleave_frame(du);  // adjoint of deinterleave is the forward relayout
    dt = conv_[2]->backward(sum_[2].backward(dt));
    Tensor ds1_skip;
    if (skip_a_) {
        dt = skip_.backward(dt);
        ds1_skip = skip_.skip_grad();
    }
    dt = conv_[1]->backward(act_[1]->backward(bn_[1]->backward(sum_[1].backward(dt))));
    if (skip_a_)
        for (std::size_t i = 0; i < dt.data.size(); ++i) dt.data[i] += ds1_skip.data[i];
    dt = conv_[0]->backward(act_[0]->backward(bn_[0]->backward(sum_[0].backward(dt))));
    return deinterleave_frame(dt, k_users_);
}

std::vector<nn::Tensor*> Encoder::params() {
    std::vector<Tensor*> p;
    for (auto& c : conv_) p.push_back(&c->weight);
    for (auto& b : bn_) {
        p.push_back(&b->gamma);
        p.push_back(&b->beta);
    }
    if (skip_a_) p.push_back(&skip_.a);
    return p;
}

std::vector<std::pair<std::string, std::vector<double>*>> Encoder::norm_state() {
    std::vector<std::pair<std::string, std::vector<double>*>> s;
    for (std::size_t i = 0; i < bn_.size(); ++i) {
        s.emplace_back("bn" + std::to_string(i) + ".running_mean", &bn_[i]->running_mean);
        s.emplace_back("bn" + std::to_string(i) + ".running_var", &bn_[i]->running_var);
    }
    return s;
}

std::uint64_t Encoder::macs() const {
    std::uint64_t m = 0;
    for (const auto& c : conv_) m += c->macs;
    return m;
}

void Encoder::reset_macs() {
    for (auto& c : conv_) c->macs = 0;
}

} // namespace tnoma::ae
