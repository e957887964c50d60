#ifndef TNOMA_SVD_CODEC_HPP
#define TNOMA_SVD_CODEC_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "tnoma/channel/channel_matrix.hpp"
#include "tnoma/channel/noise.hpp"

namespace tnoma::svd {

struct WaterfillResult {
    std::vector<double> powers;  // per interleaved slot, sums to N * total_avg_power
    double level = 0.0;          // water level of the active set
    int active = 0;
};

// Active-set water-filling over the per-slot singular values. Slot i belongs
// to user i mod K and carries weight sigma_r^2 / (|h_r|^2 lambda_i^2).
// Iterates removals until every allocation is nonnegative, so the result
// satisfies the KKT conditions exactly and sums to N * total_avg_power.
WaterfillResult waterfill(std::span<const double> lambdas,
                          std::span<const std::complex<double>> h_per_user,
                          std::span<const double> noise_var_per_user, double total_avg_power,
                          int n_symbols, int k_users);

// Literal two-step variant: clip a single all-active water level at zero,
// then rescale to the power budget. Kept for rate studies; it does not
// redistribute clipped power.
WaterfillResult waterfill_clip_rescale(std::span<const double> lambdas,
                                       std::span<const std::complex<double>> h_per_user,
                                       std::span<const double> noise_var_per_user,
                                       double total_avg_power, int n_symbols, int k_users);

// SVD precoding/decoding transceiver: encode with the right singular basis,
// decode with the left one, detect per decoupled subchannel.
class SvdCodec {
public:
    static SvdCodec build(const channel::ChannelMatrix& channel);

    int slots() const { return static_cast<int>(lambdas_.size()); }  // K * N
    int k_users() const { return k_users_; }
    int n_symbols() const { return n_symbols_; }
    int rank() const { return rank_; }

    // Per-slot singular values; slots beyond the factor rank hold zero.
    std::span<const double> lambdas() const { return lambdas_; }

    // v = V (sqrt(P) .* x); transmit energy equals sum_i P_i for BPSK x.
    std::vector<double> encode(std::span<const double> x, std::span<const double> powers) const;

    // z = U^T y, the decoupled observation.
    std::vector<std::complex<double>> project(std::span<const std::complex<double>> y) const;

    struct Decoded {
        std::vector<double> stats;       // Re(h_hat^* z_i) / (|h_hat|^2 lambda_i sqrt(P_i))
        std::vector<std::int8_t> bits;   // sign decisions, erasures resolved to +1
        std::vector<std::uint8_t> data_bearing;  // slot carries data: lambda_i and P_i above tolerance
    };
    Decoded decode(std::span<const std::complex<double>> y, std::span<const double> powers,
                   std::complex<double> h_hat) const;

    // Multiply-add counters for the dense transforms (encode: (KN)^2 per frame).
    std::uint64_t encode_macs() const { return encode_macs_; }
    std::uint64_t decode_macs() const { return decode_macs_; }
    void reset_counters() const { encode_macs_ = decode_macs_ = 0; }

    static constexpr double kRankTol = 1e-12;  // relative to the largest singular value

private:
    int k_users_ = 0;
    int n_symbols_ = 0;
    int n_valid_ = 0;
    int rank_ = 0;
    std::vector<double> lambdas_;
    common::Matrix u_;   // (K*Nv) x (K*Nv)
    common::Matrix vt_;  // (K*N) x (K*N)
    mutable std::uint64_t encode_macs_ = 0;
    mutable std::uint64_t decode_macs_ = 0;
};

} // namespace tnoma::svd

#endif
