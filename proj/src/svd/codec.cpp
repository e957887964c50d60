#include "tnoma/svd/codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tnoma::svd {

namespace {

std::vector<double> slot_weights(std::span<const double> lambdas,
                                 std::span<const std::complex<double>> h_per_user,
                                 std::span<const double> noise_var_per_user, int k_users) {
    std::vector<double> w(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const int user = static_cast<int>(i) % k_users;
        const double h2 = std::norm(h_per_user[static_cast<std::size_t>(user)]);
        const double l2 = lambdas[i] * lambdas[i];
        w[i] = (l2 > 0.0 && h2 > 0.0) ? noise_var_per_user[static_cast<std::size_t>(user)] / (h2 * l2)
                                      : std::numeric_limits<double>::infinity();
    }
    return w;
}

void validate_waterfill_args(std::span<const double> lambdas, double total_avg_power,
                             int n_symbols, int k_users) {
    if (!(total_avg_power > 0.0)) throw std::invalid_argument("waterfill: total power must be > 0");
    if (static_cast<int>(lambdas.size()) != n_symbols * k_users)
        throw std::invalid_argument("waterfill: lambdas must cover all K*N slots");
    bool any = false;
    for (double l : lambdas) {
        if (l < 0.0) throw std::invalid_argument("waterfill: singular values must be >= 0");
        any = any || l > 0.0;
    }
    if (!any) throw std::invalid_argument("waterfill: all singular values are zero");
}

} // namespace

WaterfillResult waterfill(std::span<const double> lambdas,
                          std::span<const std::complex<double>> h_per_user,
                          std::span<const double> noise_var_per_user, double total_avg_power,
                          int n_symbols, int k_users) {
    validate_waterfill_args(lambdas, total_avg_power, n_symbols, k_users);
    const double budget = static_cast<double>(n_symbols) * total_avg_power;
    std::vector<double> w = slot_weights(lambdas, h_per_user, noise_var_per_user, k_users);

    // sort weights ascending; the active set is always a prefix
    std::vector<std::size_t> order(w.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] < w[b]; });

    WaterfillResult out;
    out.powers.assign(w.size(), 0.0);
    double wsum = 0.0;
    double level = 0.0;
    int active = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (!std::isfinite(w[order[i]])) break;
        wsum += w[order[i]];
        level = (budget + wsum) / static_cast<double>(i + 1);
        active = static_cast<int>(i + 1);
        // grow the active set while the next weight stays under water
        if (i + 1 >= order.size() || !std::isfinite(w[order[i + 1]]) || w[order[i + 1]] >= level) break;
    }
    if (active == 0) throw std::runtime_error("waterfill: no usable subchannel");
    for (int i = 0; i < active; ++i) out.powers[order[static_cast<std::size_t>(i)]] = level - w[order[static_cast<std::size_t>(i)]];
    out.level = level;
    out.active = active;
    return out;
}

WaterfillResult waterfill_clip_rescale(std::span<const double> lambdas,
                                       std::span<const std::complex<double>> h_per_user,
                                       std::span<const double> noise_var_per_user,
                                       double total_avg_power, int n_symbols, int k_users) {
    validate_waterfill_args(lambdas, total_avg_power, n_symbols, k_users);
    const double budget = static_cast<double>(n_symbols) * total_avg_power;
    std::vector<double> w = slot_weights(lambdas, h_per_user, noise_var_per_user, k_users);

    double wsum = 0.0;
    std::size_t finite = 0;
    for (double v : w)
        if (std::isfinite(v)) {
            wsum += v;
            ++finite;
        }
    if (finite == 0) throw std::runtime_error("waterfill: no usable subchannel");
    const double nu = (budget + wsum) / static_cast<double>(lambdas.size());

    WaterfillResult out;
    out.powers.assign(w.size(), 0.0);
    out.level = nu;
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double p = std::isfinite(w[i]) ? std::max(nu - w[i], 0.0) : 0.0;
        out.powers[i] = p;
        total += p;
        if (p > 0.0) ++out.active;
    }
    if (total <= 0.0) throw std::runtime_error("waterfill: clipped allocation vanished");
    const double scale = budget / total;
    for (auto& p : out.powers) p *= scale;
    return out;
}

SvdCodec SvdCodec::build(const channel::ChannelMatrix& channel) {
    const auto& f = channel.svd();
    SvdCodec c;
    c.k_users_ = channel.users();
    c.n_symbols_ = channel.n_symbols();
    c.n_valid_ = channel.n_valid();
    c.u_ = f.u;
    c.vt_ = f.vt;
    c.lambdas_.assign(static_cast<std::size_t>(channel.cols()), 0.0);
    std::copy(f.sigma.begin(), f.sigma.end(), c.lambdas_.begin());

    // Slot i carries user i mod K. A plain descending spectrum would hand the
    // first user the better value of every adjacent pair, so alternate the
    // within-block order ("snake") to balance the users. Any consistent
    // column permutation of the factors is still a valid factorization.
    const std::size_t ranks = f.sigma.size();
    const int k = c.k_users_;
    std::vector<std::size_t> perm(ranks);
    for (std::size_t i = 0; i < ranks; ++i) {
        const std::size_t block = i / static_cast<std::size_t>(k);
        const std::size_t pos = i % static_cast<std::size_t>(k);
        const bool complete = (block + 1) * static_cast<std::size_t>(k) <= ranks;
        perm[i] = (complete && block % 2 == 1) ? block * k + (static_cast<std::size_t>(k) - 1 - pos) : i;
    }
    {
        std::vector<double> lam(c.lambdas_);
        common::Matrix u(f.u.rows, f.u.cols), vt(f.vt.rows, f.vt.cols);
        u = f.u;
        vt = f.vt;
        for (std::size_t i = 0; i < ranks; ++i) {
            const std::size_t j = perm[i];
            c.lambdas_[i] = lam[j];
            for (std::int64_t r = 0; r < f.u.rows; ++r) c.u_(r, static_cast<std::int64_t>(i)) = u(r, static_cast<std::int64_t>(j));
            for (std::int64_t col = 0; col < f.vt.cols; ++col)
                c.vt_(static_cast<std::int64_t>(i), col) = vt(static_cast<std::int64_t>(j), col);
        }
    }

    const double lmax = f.sigma.empty() ? 0.0 : f.sigma.front();
    c.rank_ = 0;
    for (double s : f.sigma)
        if (s > kRankTol * lmax) ++c.rank_;
    return c;
}

std::vector<double> SvdCodec::encode(std::span<const double> x, std::span<const double> powers) const {
    const std::size_t n = static_cast<std::size_t>(vt_.cols);
    if (x.size() != n || powers.size() != n) throw std::invalid_argument("SvdCodec::encode: frame size mismatch");
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = std::sqrt(powers[i]) * x[i];
    std::vector<double> v(n);
    common::matvec_t(vt_, s, v);  // V s, with V stored transposed
    encode_macs_ += static_cast<std::uint64_t>(n) * n;
    return v;
}

std::vector<std::complex<double>> SvdCodec::project(std::span<const std::complex<double>> y) const {
    const std::size_t m = static_cast<std::size_t>(u_.rows);
    if (y.size() != m) throw std::invalid_argument("SvdCodec::project: observation size mismatch");
    std::vector<double> re(m), im(m), zre(m), zim(m);
    for (std::size_t i = 0; i < m; ++i) {
        re[i] = y[i].real();
        im[i] = y[i].imag();
    }
    common::matvec_t(u_, re, zre);
    common::matvec_t(u_, im, zim);
    decode_macs_ += 2 * static_cast<std::uint64_t>(m) * m;
    std::vector<std::complex<double>> z(m);
    for (std::size_t i = 0; i < m; ++i) z[i] = {zre[i], zim[i]};
    return z;
}

SvdCodec::Decoded SvdCodec::decode(std::span<const std::complex<double>> y,
                                   std::span<const double> powers,
                                   std::complex<double> h_hat) const {
    if (h_hat == std::complex<double>(0.0, 0.0)) throw std::invalid_argument("SvdCodec::decode: h_hat must be nonzero");
    const std::size_t slots = lambdas_.size();
    if (powers.size() != slots) throw std::invalid_argument("SvdCodec::decode: powers size mismatch");
    auto z = project(y);
    const double h2 = std::norm(h_hat);
    const double lmax = lambdas_.empty() ? 0.0 : lambdas_.front();

    Decoded d;
    d.stats.assign(slots, 0.0);
    d.bits.assign(slots, 1);
    d.data_bearing.assign(slots, 0);
    for (std::size_t i = 0; i < slots; ++i) {
        const double li = lambdas_[i];
        const bool usable = li > kRankTol * lmax && powers[i] > 0.0 && i < z.size();
        if (!usable) continue;  // erasure, decided +1
        d.data_bearing[i] = 1;
        const double stat = (std::conj(h_hat) * z[i]).real() / (h2 * li * std::sqrt(powers[i]));
        d.stats[i] = stat;
        d.bits[i] = stat < 0.0 ? -1 : 1;
    }
    return d;
}

} // namespace tnoma::svd
