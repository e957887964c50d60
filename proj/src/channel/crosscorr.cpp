#include "tnoma/channel/crosscorr.hpp"

#include <cmath>
#include <stdexcept>

namespace tnoma::channel {

CrossCorrBank CrossCorrBank::build(const PulseSpec& pulse, std::vector<double> offsets,
                                   double timing_error) {
    pulse.validate();
    if (offsets.empty()) throw std::invalid_argument("CrossCorrBank: need at least one user offset");
    if (std::fabs(timing_error) >= 1.0) throw std::invalid_argument("CrossCorrBank: |timing error| must be < 1 symbol");

    CrossCorrBank bank;
    bank.users_ = static_cast<int>(offsets.size());
    bank.half_span_ = pulse.half_span();
    bank.timing_error_ = timing_error;
    bank.rolloff_ = pulse.rolloff;
    bank.offsets_ = std::move(offsets);

    const int k_users = bank.users_;
    const int s = bank.half_span_;
    const int taps = 2 * s + 1;
    bank.taps_.resize(static_cast<std::size_t>(k_users * k_users));
    bank.raw_.resize(static_cast<std::size_t>(k_users * k_users));
    bank.energy_.resize(static_cast<std::size_t>(k_users * k_users));

    for (int l = 0; l < k_users; ++l) {
        for (int k = 0; k < k_users; ++k) {
            // Receiver l is synced to its own user; the timing error moves
            // user 1's transmit offset, so pairs involving user 1 on exactly
            // one side see the perturbed lag and diagonals stay nominal.
            const double eps_rx = (l == 0) ? timing_error : 0.0;
            const double eps_tx = (k == 0) ? timing_error : 0.0;
            const double nominal = bank.offsets_[static_cast<std::size_t>(l)] - bank.offsets_[static_cast<std::size_t>(k)];
            const double shift = nominal + eps_rx - eps_tx;

            std::vector<double> raw(static_cast<std::size_t>(taps));
            double nominal_energy = 0.0;
            for (int m = -s; m <= s; ++m) {
                raw[static_cast<std::size_t>(m + s)] = raised_cosine(static_cast<double>(m) + shift, pulse.rolloff);
                const double g0 = raised_cosine(static_cast<double>(m) + nominal, pulse.rolloff);
                nominal_energy += g0 * g0;
            }
            if (nominal_energy <= 0.0) throw std::runtime_error("CrossCorrBank: degenerate pair energy");
            const double norm = std::sqrt(nominal_energy);
            std::vector<double> scaled(raw);
            for (auto& v : scaled) v /= norm;

            const std::size_t id = bank.idx(l, k);
            bank.raw_[id] = std::move(raw);
            bank.taps_[id] = std::move(scaled);
            bank.energy_[id] = nominal_energy;
        }
    }
    return bank;
}

} // namespace tnoma::channel
