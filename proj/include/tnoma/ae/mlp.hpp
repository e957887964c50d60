#ifndef TNOMA_AE_MLP_HPP
#define TNOMA_AE_MLP_HPP

#include <memory>
#include <string>
#include <vector>

#include "tnoma/nn/layers.hpp"

namespace tnoma::ae {

// Maps the transmitter-side CSI estimates to per-user power ratios through a
// softmax, so the allocations always sum to the total power. The output layer
// starts at zero, i.e. training begins from the equal split.
class MlpPowerAllocator {
public:
    MlpPowerAllocator(int k_users, int h1, int h2, int h3, common::Rng& init);

    // csi [B, 2K] (re/im per user) -> powers [B, K], rows summing to total_power
    nn::Tensor forward(const nn::Tensor& csi, double total_power, bool training);
    nn::Tensor backward(const nn::Tensor& d_powers);

    std::vector<nn::Tensor*> params();
    std::vector<std::pair<std::string, std::vector<double>*>> norm_state();
    std::uint64_t macs() const;
    void reset_macs();

private:
    int k_users_;
    double total_power_ = 0.0;
    std::vector<std::unique_ptr<nn::Linear>> lin_;
    nn::Activation selu0_{nn::Act::Selu}, selu1_{nn::Act::Selu};
    std::unique_ptr<nn::BatchNorm> bn_;
    nn::SoftmaxChannel softmax_;
};

// Receiver-side CSI transformer producing the complex combining factor q_r.
// The output layer starts at weight zero with bias (1, 0), so an untrained
// combiner is the identity.
class MlpCombiner {
public:
    MlpCombiner(int h1, int h2, common::Rng& init);

    // csi [B, 2] -> q [B, 2] (re, im)
    nn::Tensor forward(const nn::Tensor& csi);
    nn::Tensor backward(const nn::Tensor& dq);

    std::vector<nn::Tensor*> params();
    std::uint64_t macs() const;
    void reset_macs();

private:
    std::vector<std::unique_ptr<nn::Linear>> lin_;
    nn::Activation selu0_{nn::Act::Selu}, selu1_{nn::Act::Selu};
};

} // namespace tnoma::ae

#endif
