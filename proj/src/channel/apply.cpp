#include "tnoma/channel/apply.hpp"

#include <cmath>
#include <stdexcept>

namespace tnoma::channel {

std::vector<std::complex<double>> apply_channel(std::span<const double> v,
                                                std::span<const double> powers,
                                                const ChannelMatrix& channel,
                                                std::complex<double> h,
                                                const NoiseColorer* noise, double snr_db,
                                                common::Rng& rng) {
    if (v.size() != powers.size()) throw std::invalid_argument("apply_channel: v/powers size mismatch");
    std::vector<double> scaled(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double p = powers[i];
        if (!(p >= 0.0)) throw std::invalid_argument("apply_channel: powers must be >= 0");
        if (!std::isfinite(v[i])) throw std::invalid_argument("apply_channel: non-finite input");
        scaled[i] = std::sqrt(p) * v[i];
    }
    std::vector<double> s(static_cast<std::size_t>(channel.rows()));
    channel.apply(scaled, s);

    std::vector<std::complex<double>> y(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) y[i] = h * s[i];
    if (noise) noise->add_noise(y, n0_from_snr_db(snr_db), rng);
    return y;
}

} // namespace tnoma::channel
