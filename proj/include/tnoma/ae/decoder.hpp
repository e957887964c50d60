#ifndef TNOMA_AE_DECODER_HPP
#define TNOMA_AE_DECODER_HPP

#include <memory>
#include <string>
#include <vector>

#include "tnoma/ae/variant.hpp"
#include "tnoma/nn/layers.hpp"

namespace tnoma::ae {

// Per-user CNN decoder. The K complex sufficient-statistic sequences enter as
// K complex channels laid out on the interleaved time grid (grid l occupies
// every K-th position, edges zero-padded to N symbols), so the 2-row first
// stage fuses both grids around each symbol time. Later stages are banks of
// single-input filters, summed between stages; estimates for this user are
// read from its interleaved positions, giving exactly N outputs.
class Decoder {
public:
    Decoder(const AeVariant& variant, int k_users, int user_index, FinalAct head, bool skip_b,
            bool skip_c, common::Rng& init);

    // y_re/y_im: [B, K*Nv] stacked grid-major observations for this user.
    // Returns [B, N] estimates (or [B, L4, N] for the softmax head).
    nn::Tensor forward(const nn::Tensor& y_re, const nn::Tensor& y_im, int n_symbols, bool training);
    void backward(const nn::Tensor& d_est);
    const nn::Tensor& y_re_grad() const { return dy_re_; }
    const nn::Tensor& y_im_grad() const { return dy_im_; }

    std::vector<nn::Tensor*> params();
    std::vector<std::pair<std::string, std::vector<double>*>> norm_state();
    std::uint64_t macs() const;
    void reset_macs();
    FinalAct head() const { return head_; }

private:
    int k_users_, user_;
    FinalAct head_;
    bool skip_b_, skip_c_;
    int half_span_ = 0;  // captured from the frame geometry at forward time
    std::int64_t n_symbols_ = 0, n_valid_ = 0, batch_ = 0;

    std::unique_ptr<nn::Conv2dFirst> first_;
    std::vector<std::unique_ptr<nn::Conv1dBank>> conv_;  // stages 2..4
    std::vector<std::unique_ptr<nn::Activation>> act_;   // selu, selu, hswish
    std::vector<std::unique_ptr<nn::BatchNorm>> bn_;     // after each activation
    std::vector<nn::ChannelSum> sum_;
    nn::ScalarSkip skip_b_layer_, skip_c_layer_;
    nn::Activation head_act_{nn::Act::Sigmoid};
    nn::SoftmaxChannel softmax_;
    nn::Tensor s1_, dy_re_, dy_im_;
};

} // namespace tnoma::ae

#endif
