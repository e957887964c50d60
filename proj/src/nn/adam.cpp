#include "tnoma/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace tnoma::nn {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamConfig& cfg) {
    if (params.size() != grads.size()) throw std::invalid_argument("adam_step: size mismatch");
    if (state.m.size() != params.size()) {
        state.m.assign(params.size(), 0.0);
        state.v.assign(params.size(), 0.0);
        state.t = 0;
    }
    ++state.t;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
}

Adam::Adam(std::vector<Tensor*> params, AdamConfig cfg) : params_(std::move(params)), cfg_(cfg) {
    states_.resize(params_.size());
}

void Adam::step() {
    for (std::size_t i = 0; i < params_.size(); ++i)
        adam_step(params_[i]->data, params_[i]->grad, states_[i], cfg_);
}

void Adam::zero_grad() {
    for (auto* p : params_) p->zero_grad();
}

} // namespace tnoma::nn
