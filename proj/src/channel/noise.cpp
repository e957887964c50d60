#include "tnoma/channel/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace tnoma::channel {

namespace {
struct GridIndex {
    int m;
    int l;
};
} // namespace

NoiseColorer NoiseColorer::build(const CrossCorrBank& bank, int n_symbols) {
    if (bank.timing_error() != 0.0)
        throw std::invalid_argument("NoiseColorer: covariance uses the nominal (zero timing error) grids");
    NoiseColorer nc;
    nc.users_ = bank.users();
    nc.half_span_ = bank.half_span();
    nc.n_valid_ = n_symbols - 2 * bank.half_span();
    if (nc.n_valid_ <= 0) throw std::invalid_argument("NoiseColorer: frame shorter than the ISI span");
    nc.dim_ = nc.users_ * nc.n_valid_;
    nc.bandwidth_ = nc.users_ * bank.half_span() + nc.users_ - 1;
    nc.offsets_ = bank.offsets();
    nc.rolloff_ = bank.rolloff();
    nc.band_.assign(static_cast<std::size_t>(nc.dim_) * (nc.bandwidth_ + 1), 0.0);
    try {
        nc.factorize(0.0);
    } catch (const std::runtime_error&) {
        nc.ridge_ = 1e-10;  // truncated covariance can be numerically indefinite
        nc.factorize(nc.ridge_);
    }
    return nc;
}

int NoiseColorer::interleaved(int stacked) const {
    const int l = stacked / n_valid_;
    const int m = stacked % n_valid_;
    return m * users_ + l;
}

void NoiseColorer::factorize(double ridge) {
    const int bw = bandwidth_;
    auto cov = [&](int p, int q) -> double {
        const int mp = p / users_, lp = p % users_;
        const int mq = q / users_, lq = q % users_;
        const int dm = mp - mq;
        if (dm > half_span_ || dm < -half_span_) return (p == q) ? ridge : 0.0;
        double v = raised_cosine(static_cast<double>(dm) + offsets_[static_cast<std::size_t>(lp)] -
                                     offsets_[static_cast<std::size_t>(lq)],
                                 rolloff_);
        if (p == q) v += ridge;
        return v;
    };

    for (auto& v : band_) v = 0.0;
    for (int i = 0; i < dim_; ++i) {
        const int j0 = std::max(0, i - bw);
        for (int j = j0; j <= i; ++j) {
            double s = cov(i, j);
            const int k0 = std::max(j0, j - bw);
            for (int k = k0; k < j; ++k) s -= band(i, i - k) * band(j, j - k);
            if (j < i) {
                band(i, i - j) = s / band(j, 0);
            } else {
                if (s < 1e-12) throw std::runtime_error("NoiseColorer: non-positive pivot");
                band(i, 0) = std::sqrt(s);
            }
        }
    }
}

void NoiseColorer::add_noise(std::span<std::complex<double>> y, double n0, common::Rng& rng) const {
    if (static_cast<int>(y.size()) != dim_) throw std::invalid_argument("NoiseColorer: dimension mismatch");
    const double scale = std::sqrt(n0 / 2.0);
    std::vector<double> re(static_cast<std::size_t>(dim_)), im(static_cast<std::size_t>(dim_));
    for (auto& v : re) v = rng.gaussian();
    for (auto& v : im) v = rng.gaussian();
    // in-place banded lower-triangular multiply, interleaved order
    auto mul = [&](std::vector<double>& w) {
        for (int i = dim_ - 1; i >= 0; --i) {
            double acc = 0.0;
            const int dmax = std::min(i, bandwidth_);
            for (int d = 0; d <= dmax; ++d) acc += band(i, d) * w[static_cast<std::size_t>(i - d)];
            w[static_cast<std::size_t>(i)] = acc;
        }
    };
    mul(re);
    mul(im);
    for (int s = 0; s < dim_; ++s) {
        const int p = interleaved(s);
        y[static_cast<std::size_t>(s)] += std::complex<double>(scale * re[static_cast<std::size_t>(p)],
                                                               scale * im[static_cast<std::size_t>(p)]);
    }
}

void NoiseColorer::color(std::span<double> w) const {
    if (static_cast<int>(w.size()) != dim_) throw std::invalid_argument("NoiseColorer: dimension mismatch");
    std::vector<double> t(static_cast<std::size_t>(dim_));
    for (int s = 0; s < dim_; ++s) t[static_cast<std::size_t>(interleaved(s))] = w[static_cast<std::size_t>(s)];
    for (int i = dim_ - 1; i >= 0; --i) {
        double acc = 0.0;
        const int dmax = std::min(i, bandwidth_);
        for (int d = 0; d <= dmax; ++d) acc += band(i, d) * t[static_cast<std::size_t>(i - d)];
        t[static_cast<std::size_t>(i)] = acc;
    }
    for (int s = 0; s < dim_; ++s) w[static_cast<std::size_t>(s)] = t[static_cast<std::size_t>(interleaved(s))];
}

void NoiseColorer::whiten(std::span<double> x) const {
    if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("NoiseColorer: dimension mismatch");
    std::vector<double> t(static_cast<std::size_t>(dim_));
    for (int s = 0; s < dim_; ++s) t[static_cast<std::size_t>(interleaved(s))] = x[static_cast<std::size_t>(s)];
    for (int i = 0; i < dim_; ++i) {
        double acc = t[static_cast<std::size_t>(i)];
        const int dmax = std::min(i, bandwidth_);
        for (int d = 1; d <= dmax; ++d) acc -= band(i, d) * t[static_cast<std::size_t>(i - d)];
        t[static_cast<std::size_t>(i)] = acc / band(i, 0);
    }
    for (int s = 0; s < dim_; ++s) x[static_cast<std::size_t>(s)] = t[static_cast<std::size_t>(interleaved(s))];
}

double NoiseColorer::covariance_entry(int i, int j) const {
    const int li = i / n_valid_, mi = i % n_valid_;
    const int lj = j / n_valid_, mj = j % n_valid_;
    const int dm = mi - mj;
    double v = 0.0;
    if (dm <= half_span_ && dm >= -half_span_)
        v = raised_cosine(static_cast<double>(dm) + offsets_[static_cast<std::size_t>(li)] -
                              offsets_[static_cast<std::size_t>(lj)],
                          rolloff_);
    if (i == j) v += ridge_;
    return v;
}

} // namespace tnoma::channel
