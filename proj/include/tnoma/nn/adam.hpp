#ifndef TNOMA_NN_ADAM_HPP
#define TNOMA_NN_ADAM_HPP

#include <span>
#include <vector>

#include "tnoma/nn/tensor.hpp"

namespace tnoma::nn {

struct AdamConfig {
    double lr = 3e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::vector<double> m, v;
    std::int64_t t = 0;
};

// One bias-corrected update of params in place.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamConfig& cfg);

// Optimizer over a fixed parameter list.
class Adam {
public:
    Adam(std::vector<Tensor*> params, AdamConfig cfg);

    void step();
    void zero_grad();

    const std::vector<Tensor*>& params() const { return params_; }
    std::vector<AdamState>& states() { return states_; }
    const AdamConfig& config() const { return cfg_; }

private:
    std::vector<Tensor*> params_;
    std::vector<AdamState> states_;
    AdamConfig cfg_;
};

} // namespace tnoma::nn

#endif
