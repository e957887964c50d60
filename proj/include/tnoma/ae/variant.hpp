#ifndef TNOMA_AE_VARIANT_HPP
#define TNOMA_AE_VARIANT_HPP

#include <array>

namespace tnoma::ae {

// Filter-bank sizes for the nine encoder/decoder pairs. Every variant uses
// length-11 FIR kernels.
struct AeVariant {
    int id = 5;
    std::array<int, 3> encoder_filters{2, 4, 2};
    std::array<int, 4> decoder_filters{2, 4, 4, 2};
    int kernel_len = 11;
};

AeVariant ae_variant(int id);  // 1..9

enum class FinalAct { Sigmoid, Tanh, Identity, Softmax };

} // namespace tnoma::ae

#endif
