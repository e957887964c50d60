#ifndef TNOMA_CHANNEL_APPLY_HPP
#define TNOMA_CHANNEL_APPLY_HPP

#include <complex>
#include <span>
#include <vector>

#include "tnoma/channel/channel_matrix.hpp"
#include "tnoma/channel/noise.hpp"
#include "tnoma/common/rng.hpp"

namespace tnoma::channel {

// One receiver's observation y = h * G * (sqrt(P) .* v) + n.
// v and powers are interleaved length K*N; powers holds the per-slot P_{k,n}.
// snr_db sets N0 = 10^(-snr_db / 10); pass noise = nullptr for a noise-free pass.
std::vector<std::complex<double>> apply_channel(std::span<const double> v,
                                                std::span<const double> powers,
                                                const ChannelMatrix& channel,
                                                std::complex<double> h,
                                                const NoiseColorer* noise, double snr_db,
                                                common::Rng& rng);

inline double n0_from_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

} // namespace tnoma::channel

#endif
