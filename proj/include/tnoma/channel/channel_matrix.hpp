#ifndef TNOMA_CHANNEL_CHANNEL_MATRIX_HPP
#define TNOMA_CHANNEL_CHANNEL_MATRIX_HPP

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tnoma/channel/crosscorr.hpp"
#include "tnoma/common/mat.hpp"

namespace tnoma::channel {

// Fast superposition-convolution path shared by the dense matrix and the
// trainable system: y = G x with y stacked per receive grid (K * Nv) and x
// interleaved per symbol time (x[n*K + k] = user k, symbol n).
// Only the Nv = N - span + 1 outputs whose kernel stays inside the frame are
// produced. `normalized` selects unit-energy taps; raw taps give the physical
// matched-filter gains.
void banded_apply(const CrossCorrBank& bank, int n_symbols, std::span<const double> x,
                  std::span<double> y, bool normalized = true);
void banded_apply_adjoint(const CrossCorrBank& bank, int n_symbols, std::span<const double> y,
                          std::span<double> x, bool normalized = true);

int valid_outputs(const CrossCorrBank& bank, int n_symbols);

// Doubly-block Toeplitz channel matrix (K*Nv) x (K*N) with cached SVD factors.
class ChannelMatrix {
public:
    static ChannelMatrix build(const CrossCorrBank& bank, int n_symbols, bool normalized = true);

    int users() const { return bank_.users(); }
    int n_symbols() const { return n_symbols_; }
    int n_valid() const { return n_valid_; }
    std::int64_t rows() const { return dense_.rows; }
    std::int64_t cols() const { return dense_.cols; }

    const CrossCorrBank& bank() const { return bank_; }
    const common::Matrix& dense() const { return dense_; }

    // Full factors G = U diag(sigma) V^T; computed on first access, cached.
    const common::SvdResult& svd() const;

    void apply(std::span<const double> x, std::span<double> y) const {
        banded_apply(bank_, n_symbols_, x, y, normalized_);
    }
    void apply_adjoint(std::span<const double> y, std::span<double> x) const {
        banded_apply_adjoint(bank_, n_symbols_, y, x, normalized_);
    }

private:
    CrossCorrBank bank_;
    int n_symbols_ = 0;
    int n_valid_ = 0;
    bool normalized_ = true;
    common::Matrix dense_;
    mutable std::optional<common::SvdResult> svd_;
};

} // namespace tnoma::channel

#endif
