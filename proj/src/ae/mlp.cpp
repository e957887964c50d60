#include "tnoma/ae/mlp.hpp"

#include <stdexcept>

namespace tnoma::ae {

using nn::Tensor;

MlpPowerAllocator::MlpPowerAllocator(int k_users, int h1, int h2, int h3, common::Rng& init)
    : k_users_(k_users) {
    lin_.push_back(std::make_unique<nn::Linear>(2 * k_users, h1, init));
    lin_.push_back(std::make_unique<nn::Linear>(h1, h2, init));
    lin_.push_back(std::make_unique<nn::Linear>(h2, h3, init));
    lin_.push_back(std::make_unique<nn::Linear>(h3, k_users, init));
    bn_ = std::make_unique<nn::BatchNorm>(h2);
    // start from the equal split
    for (auto& w : lin_[3]->weight.data) w = 0.0;
}

Tensor MlpPowerAllocator::forward(const Tensor& csi, double total_power, bool training) {
    if (!(total_power > 0.0)) throw std::invalid_argument("MlpPowerAllocator: total power must be > 0");
    total_power_ = total_power;
    Tensor t = selu0_.forward(lin_[0]->forward(csi));
    t = bn_->forward(selu1_.forward(lin_[1]->forward(t)), training);
    t = lin_[2]->forward(t);
    t = lin_[3]->forward(t);
    Tensor p = softmax_.forward(t);
    for (auto& v : p.data) v *= total_power;
    return p;
}

Tensor MlpPowerAllocator::backward(const Tensor& d_powers) {
    Tensor ds = d_powers;
    for (auto& v : ds.data) v *= total_power_;
    Tensor dt = softmax_.backward(ds);
    dt = lin_[3]->backward(dt);
    dt = lin_[2]->backward(dt);
    dt = lin_[1]->backward(selu1_.backward(bn_->backward(dt)));
    return lin_[0]->backward(selu0_.backward(dt));
}

std::vector<nn::Tensor*> MlpPowerAllocator::params() {
    std::vector<Tensor*> p;
    for (auto& l : lin_) {
        p.push_back(&l->weight);
        p.push_back(&l->bias);
    }
    p.push_back(&bn_->gamma);
    p.push_back(&bn_->beta);
    return p;
}

std::vector<std::pair<std::string, std::vector<double>*>> MlpPowerAllocator::norm_state() {
    return {{"bn.running_mean", &bn_->running_mean}, {"bn.running_var", &bn_->running_var}};
}

std::uint64_t MlpPowerAllocator::macs() const {
    std::uint64_t m = 0;
    for (const auto& l : lin_) m += l->macs;
    return m;
}

void MlpPowerAllocator::reset_macs() {
    for (auto& l : lin_) l->macs = 0;
}

MlpCombiner::MlpCombiner(int h1, int h2, common::Rng& init) {
    lin_.push_back(std::make_unique<nn::Linear>(2, h1, init));
    lin_.push_back(std::make_unique<nn::Linear>(h1, h2, init));
    lin_.push_back(std::make_unique<nn::Linear>(h2, 2, init));
    // identity combining until trained
    for (auto& w : lin_[2]->weight.data) w = 0.0;
    lin_[2]->bias.data[0] = 1.0;
    lin_[2]->bias.data[1] = 0.0;
}

Tensor MlpCombiner::forward(const Tensor& csi) {
    Tensor t = selu0_.forward(lin_[0]->forward(csi));
    t = selu1_.forward(lin_[1]->forward(t));
    return lin_[2]->forward(t);
}

Tensor MlpCombiner::backward(const Tensor& dq) {
    Tensor dt = lin_[2]->backward(dq);
    dt = lin_[1]->backward(selu1_.backward(dt));
    return lin_[0]->backward(selu0_.backward(dt));
}

std::vector<nn::Tensor*> MlpCombiner::params() {
    std::vector<Tensor*> p;
    for (auto& l : lin_) {
        p.push_back(&l->weight);
        p.push_back(&l->bias);
    }
    return p;
}

std::uint64_t MlpCombiner::macs() const {
    std::uint64_t m = 0;
    for (const auto& l : lin_) m += l->macs;
    return m;
}

void MlpCombiner::reset_macs() {
    for (auto& l : lin_) l->macs = 0;
}

} // namespace tnoma::ae
