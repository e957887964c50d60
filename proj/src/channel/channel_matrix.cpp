#include "tnoma/channel/channel_matrix.hpp"

#include <stdexcept>

namespace tnoma::channel {

int valid_outputs(const CrossCorrBank& bank, int n_symbols) {
    return n_symbols - 2 * bank.half_span();
}

void banded_apply(const CrossCorrBank& bank, int n_symbols, std::span<const double> x,
                  std::span<double> y, bool normalized) {
    const int k_users = bank.users();
    const int s = bank.half_span();
    const int nv = valid_outputs(bank, n_symbols);
    if (nv <= 0) throw std::invalid_argument("banded_apply: frame shorter than the ISI span");
    if (static_cast<int>(x.size()) != k_users * n_symbols || static_cast<int>(y.size()) != k_users * nv)
        throw std::invalid_argument("banded_apply: dimension mismatch");

    for (int l = 0; l < k_users; ++l) {
        double* yl = y.data() + static_cast<std::size_t>(l) * nv;
        for (int m = 0; m < nv; ++m) yl[m] = 0.0;
        for (int k = 0; k < k_users; ++k) {
            const double* g = normalized ? bank.taps(l, k).data() : bank.raw_taps(l, k).data();
            // output m (0-based) sits at symbol position m + s; tap j multiplies x_k[m + s - j]
            for (int m = 0; m < nv; ++m) {
                double acc = 0.0;
                const int base = m + s;
                for (int j = -s; j <= s; ++j)
                    acc += g[j + s] * x[static_cast<std::size_t>((base - j) * k_users + k)];
                yl[m] += acc;
            }
        }
    }
}

void banded_apply_adjoint(const CrossCorrBank& bank, int n_symbols, std::span<const double> y,
                          std::span<double> x, bool normalized) {
    const int k_users = bank.users();
    const int s = bank.half_span();
    const int nv = valid_outputs(bank, n_symbols);
    if (nv <= 0) throw std::invalid_argument("banded_apply_adjoint: frame shorter than the ISI span");
    if (static_cast<int>(x.size()) != k_users * n_symbols || static_cast<int>(y.size()) != k_users * nv)
        throw std::invalid_argument("banded_apply_adjoint: dimension mismatch");

    for (auto& v : x) v = 0.0;
    for (int l = 0; l < k_users; ++l) {
        const double* yl = y.data() + static_cast<std::size_t>(l) * nv;
        for (int k = 0; k < k_users; ++k) {
            const double* g = normalized ? bank.taps(l, k).data() : bank.raw_taps(l, k).data();
            for (int m = 0; m < nv; ++m) {
                const double ym = yl[m];
                if (ym == 0.0) continue;
                const int base = m + s;
                for (int j = -s; j <= s; ++j)
                    x[static_cast<std::size_t>((base - j) * k_users + k)] += g[j + s] * ym;
            }
        }
    }
}

ChannelMatrix ChannelMatrix::build(const CrossCorrBank& bank, int n_symbols, bool normalized) {
    const int k_users = bank.users();
    const int s = bank.half_span();
    const int nv = n_symbols - 2 * s;
    if (nv <= 0) throw std::invalid_argument("ChannelMatrix: n_symbols must exceed the ISI span");

    ChannelMatrix cm;
    cm.bank_ = bank;
    cm.n_symbols_ = n_symbols;
    cm.n_valid_ = nv;
    cm.normalized_ = normalized;
    cm.dense_ = common::Matrix(static_cast<std::int64_t>(k_users) * nv,
                               static_cast<std::int64_t>(k_users) * n_symbols);
    for (int l = 0; l < k_users; ++l) {
        for (int m = 0; m < nv; ++m) {
            const std::int64_t row = static_cast<std::int64_t>(l) * nv + m;
            for (int k = 0; k < k_users; ++k) {
                for (int j = -s; j <= s; ++j) {
                    const int n = m + s - j;
                    const double v = normalized ? bank.tap(l, k, j) : bank.raw_tap(l, k, j);
                    cm.dense_(row, static_cast<std::int64_t>(n) * k_users + k) = v;
                }
            }
        }
    }
    return cm;
}

const common::SvdResult& ChannelMatrix::svd() const {
    if (!svd_) svd_ = common::svd_full(dense_);
    return *svd_;
}

} // namespace tnoma::channel
