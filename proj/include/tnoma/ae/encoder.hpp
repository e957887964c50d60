#ifndef TNOMA_AE_ENCODER_HPP
#define TNOMA_AE_ENCODER_HPP

#include <memory>
#include <string>
#include <vector>

#include "tnoma/ae/variant.hpp"
#include "tnoma/nn/layers.hpp"

namespace tnoma::ae {

// Rate-one CNN encoder on the time-interleaved frame. Users' symbols are
// interleaved sample-wise so a short kernel spans both users around each
// symbol time. Each stage is a bank of single-input FIR filters whose
// activated outputs are summed back into one sequence; the final stage feeds
// the per-user zero-mean power normalization.
class Encoder {
public:
    Encoder(const AeVariant& variant, int k_users, bool skip_a, common::Rng& init);

    // bits [B, K, N], powers [B, K] -> v [B, K, N]
    nn::Tensor forward(const nn::Tensor& bits, const nn::Tensor& powers, bool training);
    // dv -> d(bits); per-user power gradients at powers_grad()
    nn::Tensor backward(const nn::Tensor& dv);
    const nn::Tensor& powers_grad() const { return norm_.powers_grad(); }

    std::vector<nn::Tensor*> params();
    std::vector<std::pair<std::string, std::vector<double>*>> norm_state();
    std::uint64_t macs() const;
    void reset_macs();
    bool skip_a() const { return skip_a_; }

private:
    int k_users_;
    bool skip_a_;
    std::vector<std::unique_ptr<nn::Conv1dBank>> conv_;
    std::vector<std::unique_ptr<nn::Activation>> act_;
    std::vector<std::unique_ptr<nn::BatchNorm>> bn_;
    std::vector<nn::ChannelSum> sum_;
    nn::ScalarSkip skip_;
    nn::PowerNorm norm_;
    nn::Tensor s1_;
    std::int64_t n_symbols_ = 0;
};

// Layout helpers shared with the channel hand-off.
nn::Tensor interleave_frame(const nn::Tensor& x);    // [B, K, N] -> [B, 1, K*N]
nn::Tensor deinterleave_frame(const nn::Tensor& t, int k_users);  // inverse

} // namespace tnoma::ae

#endif
