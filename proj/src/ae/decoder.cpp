#include "tnoma/ae/decoder.hpp"

#include <stdexcept>

namespace tnoma::ae {

using nn::Tensor;

Decoder::Decoder(const AeVariant& variant, int k_users, int user_index, FinalAct head, bool skip_b,
                 bool skip_c, common::Rng& init)
    : k_users_(k_users), user_(user_index), head_(head), skip_b_(skip_b), skip_c_(skip_c) {
    first_ = std::make_unique<nn::Conv2dFirst>(k_users, variant.decoder_filters[0], variant.kernel_len, init);
    for (int i = 1; i < 4; ++i)
        conv_.push_back(std::make_unique<nn::Conv1dBank>(1, variant.decoder_filters[static_cast<std::size_t>(i)],
                                                         variant.kernel_len, init));
    act_.push_back(std::make_unique<nn::Activation>(nn::Act::Selu));
    act_.push_back(std::make_unique<nn::Activation>(nn::Act::Selu));
    act_.push_back(std::make_unique<nn::Activation>(nn::Act::HSwish));
    for (int i = 0; i < 3; ++i) bn_.push_back(std::make_unique<nn::BatchNorm>(variant.decoder_filters[static_cast<std::size_t>(i)]));
    sum_.resize(4);
    switch (head) {
        case FinalAct::Sigmoid: head_act_ = nn::Activation(nn::Act::Sigmoid); break;
        case FinalAct::Tanh: head_act_ = nn::Activation(nn::Act::Tanh); break;
        case FinalAct::Identity: head_act_ = nn::Activation(nn::Act::Identity); break;
        case FinalAct::Softmax: break;
    }
}

Tensor Decoder::forward(const Tensor& y_re, const Tensor& y_im, int n_symbols, bool training) {
    if (y_re.rank() != 2 || y_im.rank() != 2) throw std::invalid_argument("Decoder: expected [B, K*Nv]");
    batch_ = y_re.dim(0);
    n_symbols_ = n_symbols;
    n_valid_ = y_re.dim(1) / k_users_;
    half_span_ = static_cast<int>(n_symbols - n_valid_) / 2;
    const std::int64_t kn = static_cast<std::int64_t>(k_users_) * n_symbols;

    Tensor x = Tensor::zeros({batch_, k_users_, 2, kn});
    for (std::int64_t b = 0; b < batch_; ++b)
        for (int l = 0; l < k_users_; ++l)
            for (std::int64_t m = 0; m < n_valid_; ++m) {
                const std::int64_t q = (m + half_span_) * k_users_ + l;
                const std::int64_t src = b * k_users_ * n_valid_ + l * n_valid_ + m;
                x.data[static_cast<std::size_t>(((b * k_users_ + l) * 2 + 0) * kn + q)] = y_re.data[static_cast<std::size_t>(src)];
                x.data[static_cast<std::size_t>(((b * k_users_ + l) * 2 + 1) * kn + q)] = y_im.data[static_cast<std::size_t>(src)];
            }

    Tensor t = sum_[0].forward(bn_[0]->forward(act_[0]->forward(first_->forward(x)), training));
    s1_ = t;
    t = sum_[1].forward(bn_[1]->forward(act_[1]->forward(conv_[0]->forward(t)), training));
    if (skip_b_) t = skip_b_layer_.forward(t, s1_);
    t = sum_[2].forward(bn_[2]->forward(act_[2]->forward(conv_[1]->forward(t)), training));
    if (skip_c_) t = skip_c_layer_.forward(t, s1_);
    t = conv_[2]->forward(t);

    if (head_ == FinalAct::Softmax) {
        Tensor z = softmax_.forward(t);
        const std::int64_t m_n = z.dim(1);
        Tensor est = Tensor::zeros({batch_, m_n, static_cast<std::int64_t>(n_symbols)});
        for (std::int64_t b = 0; b < batch_; ++b)
            for (std::int64_t m = 0; m < m_n; ++m)
                for (std::int64_t i = 0; i < n_symbols; ++i)
                    est.data[static_cast<std::size_t>((b * m_n + m) * n_symbols + i)] =
                        z.data[static_cast<std::size_t>((b * m_n + m) * kn + i * k_users_ + user_)];
        return est;
    }

    Tensor z = head_act_.forward(sum_[3].forward(t));
    Tensor est = Tensor::zeros({batch_, static_cast<std::int64_t>(n_symbols)});
    for (std::int64_t b = 0; b < batch_; ++b)
        for (std::int64_t i = 0; i < n_symbols; ++i)
            est.data[static_cast<std::size_t>(b * n_symbols + i)] =
                z.data[static_cast<std::size_t>(b * kn + i * k_users_ + user_)];
    return est;
}

void Decoder::backward(const Tensor& d_est) {
    const std::int64_t kn = static_cast<std::int64_t>(k_users_) * n_symbols_;
    Tensor dt;
    if (head_ == FinalAct::Softmax) {
        const std::int64_t m_n = d_est.dim(1);
        Tensor dz = Tensor::zeros({batch_, m_n, kn});
        for (std::int64_t b = 0; b < batch_; ++b)
            for (std::int64_t m = 0; m < m_n; ++m)
                for (std::int64_t i = 0; i < n_symbols_; ++i)
                    dz.data[static_cast<std::size_t>((b * m_n + m) * kn + i * k_users_ + user_)] =
                        d_est.data[static_cast<std::size_t>((b * m_n + m) * n_symbols_ + i)];
        dt = softmax_.backward(dz);
    } else {
        Tensor dz = Tensor::zeros({batch_, static_cast<std::int64_t>(1), kn});
        for (std::int64_t b = 0; b < batch_; ++b)
            for (std::int64_t i = 0; i < n_symbols_; ++i)
                dz.data[static_cast<std::size_t>(b * kn + i * k_users_ + user_)] =
                    d_est.data[static_cast<std::size_t>(b * n_symbols_ + i)];
        dt = sum_[3].backward(head_act_.backward(dz));
    }
    dt = conv_[2]->backward(dt);

    Tensor ds1_c, ds1_b;
    if (skip_c_) {
        dt = skip_c_layer_.backward(dt);
        ds1_c = skip_c_layer_.skip_grad();
    }
    dt = conv_[1]->backward(act_[2]->backward(bn_[2]->backward(sum_[2].backward(dt))));
    if (skip_b_) {
        dt = skip_b_layer_.backward(dt);
        ds1_b = skip_b_layer_.skip_grad();
    }
    dt = conv_[0]->backward(act_[1]->backward(bn_[1]->backward(sum_[1].backward(dt))));
    if (skip_c_)
        for (std::size_t i = 0; i < dt.data.size(); ++i) dt.data[i] += ds1_c.data[i];
    if (skip_b_)
        for (std::size_t i = 0; i < dt.data.size(); ++i) dt.data[i] += ds1_b.data[i];
    Tensor dx = first_->backward(act_[0]->backward(bn_[0]->backward(sum_[0].backward(dt))));

    dy_re_ = Tensor::zeros({batch_, static_cast<std::int64_t>(k_users_) * n_valid_});
    dy_im_ = Tensor::zeros({batch_, static_cast<std::int64_t>(k_users_) * n_valid_});
    for (std::int64_t b = 0; b < batch_; ++b)
        for (int l = 0; l < k_users_; ++l)
            for (std::int64_t m = 0; m < n_valid_; ++m) {
                const std::int64_t q = (m + half_span_) * k_users_ + l;
                const std::int64_t dst = b * k_users_ * n_valid_ + l * n_valid_ + m;
                dy_re_.data[static_cast<std::size_t>(dst)] =
                    dx.data[static_cast<std::size_t>(((b * k_users_ + l) * 2 + 0) * kn + q)];
                dy_im_.data[static_cast<std::size_t>(dst)] =
                    dx.data[static_cast<std::size_t>(((b * k_users_ + l) * 2 + 1) * kn + q)];
            }
}

std::vector<nn::Tensor*> Decoder::params() {
    std::vector<Tensor*> p;
    p.push_back(&first_->weight);
    for (auto& c : conv_) p.push_back(&c->weight);
    for (auto& b : bn_) {
        p.push_back(&b->gamma);
        p.push_back(&b->beta);
    }
    if (skip_b_) p.push_back(&skip_b_layer_.a);
    if (skip_c_) p.push_back(&skip_c_layer_.a);
    return p;
}

std::vector<std::pair<std::string, std::vector<double>*>> Decoder::norm_state() {
    std::vector<std::pair<std::string, std::vector<double>*>> s;
    for (std::size_t i = 0; i < bn_.size(); ++i) {
        s.emplace_back("bn" + std::to_string(i) + ".running_mean", &bn_[i]->running_mean);
        s.emplace_back("bn" + std::to_string(i) + ".running_var", &bn_[i]->running_var);
    }
    return s;
}

std::uint64_t Decoder::macs() const {
    std::uint64_t m = first_->macs;
    for (const auto& c : conv_) m += c->macs;
    return m;
}

void Decoder::reset_macs() {
    first_->macs = 0;
    for (auto& c : conv_) c->macs = 0;
}

} // namespace tnoma::ae
