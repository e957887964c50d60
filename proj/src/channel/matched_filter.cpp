#include "tnoma/channel/matched_filter.hpp"

#include <cmath>
#include <stdexcept>

namespace tnoma::channel {

std::vector<double> matched_filter_oracle(std::span<const double> x_interleaved,
                                          const PulseSpec& pulse,
                                          std::span<const double> offsets, int n_symbols,
                                          int oversample, double support) {
    pulse.validate();
    if (oversample < 16) throw std::invalid_argument("matched_filter_oracle: oversample must be >= 16");
    const int k_users = static_cast<int>(offsets.size());
    const int s = pulse.half_span();
    const int nv = n_symbols - 2 * s;
    if (nv <= 0) throw std::invalid_argument("matched_filter_oracle: frame shorter than the ISI span");
    if (static_cast<int>(x_interleaved.size()) != k_users * n_symbols)
        throw std::invalid_argument("matched_filter_oracle: frame size mismatch");

    const double beta = pulse.rolloff;
    const double t0 = -support;
    const double t1 = static_cast<double>(n_symbols) + support;
    const std::int64_t grid_n = static_cast<std::int64_t>(std::ceil((t1 - t0) * oversample)) + 1;
    const double dt = 1.0 / static_cast<double>(oversample);

    // superposed transmit waveform on the fine grid
    std::vector<double> wave(static_cast<std::size_t>(grid_n), 0.0);
    for (std::int64_t i = 0; i < grid_n; ++i) {
        const double t = t0 + static_cast<double>(i) * dt;
        double acc = 0.0;
        for (int n = 0; n < n_symbols; ++n) {
            for (int k = 0; k < k_users; ++k) {
                const double arg = t - static_cast<double>(n) - offsets[static_cast<std::size_t>(k)];
                if (arg < -support || arg > support) continue;
                acc += x_interleaved[static_cast<std::size_t>(n * k_users + k)] * root_raised_cosine(arg, beta);
            }
        }
        wave[static_cast<std::size_t>(i)] = acc;
    }

    // correlate against the pulse at each receive grid position
    std::vector<double> out(static_cast<std::size_t>(k_users * nv), 0.0);
    for (int l = 0; l < k_users; ++l) {
        for (int m = 0; m < nv; ++m) {
            const double center = static_cast<double>(m + s) + offsets[static_cast<std::size_t>(l)];
            const std::int64_t i0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((center - support - t0) / dt)));
            const std::int64_t i1 = std::min<std::int64_t>(grid_n - 1, static_cast<std::int64_t>(std::ceil((center + support - t0) / dt)));
            double acc = 0.0;
            for (std::int64_t i = i0; i <= i1; ++i) {
                const double t = t0 + static_cast<double>(i) * dt;
                acc += wave[static_cast<std::size_t>(i)] * root_raised_cosine(t - center, beta);
            }
            out[static_cast<std::size_t>(l * nv + m)] = acc * dt;
        }
    }
    return out;
}

std::vector<double> matched_filter_oracle2(std::span<const double> x1, std::span<const double> x2,
                                           const PulseSpec& pulse, double tau1, double tau2,
                                           int oversample, double support) {
    if (x1.size() != x2.size()) throw std::invalid_argument("matched_filter_oracle2: frame size mismatch");
    const int n = static_cast<int>(x1.size());
    std::vector<double> interleaved(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
        interleaved[static_cast<std::size_t>(2 * i)] = x1[static_cast<std::size_t>(i)];
        interleaved[static_cast<std::size_t>(2 * i + 1)] = x2[static_cast<std::size_t>(i)];
    }
    const double offs[2] = {tau1, tau2};
    return matched_filter_oracle(interleaved, pulse, offs, n, oversample, support);
}

} // namespace tnoma::channel
