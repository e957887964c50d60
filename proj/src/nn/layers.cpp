#include "tnoma/nn/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace tnoma::nn {

namespace {
constexpr double kSeluGamma = 1.0507009873554804934193349852946;
constexpr double kSeluAlpha = 1.6732632423543772848170429916717;
} // namespace

double selu(double x) { return x > 0.0 ? kSeluGamma * x : kSeluGamma * kSeluAlpha * (std::exp(x) - 1.0); }

double hswish(double x) {
    double c = x + 3.0;
    if (c < 0.0) c = 0.0;
    if (c > 6.0) c = 6.0;
    return x * c / 6.0;
}

void init_gaussian(Tensor& t, double fan_in, common::Rng& rng) {
    const double s = std::sqrt(1.0 / fan_in);
    for (auto& v : t.data) v = s * rng.gaussian();
}

// ---------------------------------------------------------------- Conv1dBank

Conv1dBank::Conv1dBank(int c_in, int c_out, int kernel_len, common::Rng& init)
    : c_in_(c_in), c_out_(c_out), s_(kernel_len) {
    if (kernel_len < 1 || kernel_len % 2 == 0) throw std::invalid_argument("Conv1dBank: kernel length must be odd");
    weight = Tensor::zeros({c_out, c_in, kernel_len}, true);
    init_gaussian(weight, static_cast<double>(c_in * kernel_len), init);
}

Tensor Conv1dBank::forward(const Tensor& x) {
    if (x.rank() != 3 || x.dim(1) != c_in_) throw std::invalid_argument("Conv1dBank: expected [B, C_in, L]");
    batch_ = x.dim(0);
    len_ = x.dim(2);
    const int pad = (s_ - 1) / 2;
    const std::int64_t lp = len_ + 2 * pad;
    x_pad_ = Tensor::zeros({batch_, c_in_, lp});
    for (std::int64_t b = 0; b < batch_; ++b)
        for (int c = 0; c < c_in_; ++c) {
            const double* src = x.data.data() + (b * c_in_ + c) * len_;
            double* dst = x_pad_.data.data() + (b * c_in_ + c) * lp + pad;
            for (std::int64_t t = 0; t < len_; ++t) dst[t] = src[t];
        }

    Tensor y = Tensor::zeros({batch_, c_out_, len_});
    for (std::int64_t b = 0; b < batch_; ++b)
        for (int o = 0; o < c_out_; ++o) {
            double* yr = y.data.data() + (b * c_out_ + o) * len_;
            for (int c = 0; c < c_in_; ++c) {
                const double* xr = x_pad_.data.data() + (b * c_in_ + c) * lp;
                const double* w = weight.data.data() + (static_cast<std::int64_t>(o) * c_in_ + c) * s_;
                for (int j = 0; j < s_; ++j) {
                    const double wj = w[j];
                    const double* xs = xr + j;
                    for (std::int64_t t = 0; t < len_; ++t) yr[t] += wj * xs[t];
                }
            }
        }
    macs += static_cast<std::uint64_t>(batch_) * c_out_ * c_in_ * s_ * len_;
    check_finite(y, "Conv1dBank");
    return y;
}

Tensor Conv1dBank::backward(const Tensor& dy) {
    const int pad = (s_ - 1) / 2;
    const std::int64_t lp = len_ + 2 * pad;
    Tensor dxp = Tensor::zeros({batch_, c_in_, lp});
    for (std::int64_t b = 0; b < batch_; ++b)
        for (int o = 0; o < c_out_; ++o) {
            const double* dyr = dy.data.data() + (b * c_out_ + o) * len_;
            for (int c = 0; c < c_in_; ++c) {
                const double* xr = x_pad_.data.data() + (b * c_in_ + c) * lp;
                double* dxr = dxp.data.data() + (b * c_in_ + c) * lp;
                double* dw = weight.grad.data() + (static_cast<std::int64_t>(o) * c_in_ + c) * s_;
                for (int j = 0; j < s_; ++j) {
                    double acc = 0.0;
                    const double* xs = xr + j;
                    double* dxs = dxr + j;
                    const double wj = weight.data[(static_cast<std::int64_t>(o) * c_in_ + c) * s_ + j];
                    for (std::int64_t t = 0; t < len_; ++t) {
                        acc += dyr[t] * xs[t];
                        dxs[t] += wj * dyr[t];
                    }
                    dw[j] += acc;
                }
            }
        }
    Tensor dx = Tensor::zeros({batch_, c_in_, len_});
    for (std::int64_t b = 0; b < batch_; ++b)
        for (int c = 0; c < c_in_; ++c) {
            const double* src = dxp.data.data() + (b * c_in_ + c) * lp + pad;
            double* dst = dx.data.data() + (b * c_in_ + c) * len_;
            for (std::int64_t t = 0; t < len_; ++t) dst[t] = src[t];
        }
    return dx;
}

// --------------------------------------------------------------- Conv2dFirst

Conv2dFirst::Conv2dFirst(int c_in, int c_out, int kernel_len, common::Rng& init)
    : c_in_(c_in), c_out_(c_out), s_(kernel_len) {
    if (kernel_len < 1 || kernel_len % 2 == 0) throw std::invalid_argument("Conv2dFirst: kernel length must be odd");
    weight = Tensor::zeros({c_out, c_in, 2, kernel_len}, true);
    init_gaussian(weight, static_cast<double>(2 * c_in * kernel_len), init);
}

Tensor Conv2dFirst::forward(const Tensor& x) {
    if (x.rank() != 4 || x.dim(1) != c_in_ || x.dim(2) != 2)
        throw std::invalid_argument("Conv2dFirst: expected [B, C_in, 2, L]");
    batch_ = x.dim(0);
    len_ = x.dim(3);
    const int pad = (s_ - 1) / 2;
    const std::int64_t lp = len_ + 2 * pad;
    x_pad_ = Tensor::zeros({batch_, c_in_, 2, lp});
    for (std::int64_t b = 0; b < batch_; ++b)
        for (int c = 0; c < c_in_; ++c)
            for (int r = 0; r < 2; ++r) {
                const double* src = x.data.data() + ((b * c_in_ + c) * 2 + r) * len_;
                double* dst = x_pad_.data.data() + ((b * c_in_ + c) * 2 + r) * lp + pad;
                for (std::int64_t t = 0; t < len_; ++t) dst[t] = src[t];
            }

    Tensor y = Tensor::zeros({batch_, c_out_, len_});
    for (std::int64_t b = 0; b < batch_; ++b)
        for (int o = 0; o < c_out_; ++o) {
            double* yr = y.data.data() + (b * c_out_ + o) * len_;
            for (int c = 0; c < c_in_; ++c)
                for (int r = 0; r < 2; ++r) {
                    const double* xr = x_pad_.data.data() + ((b * c_in_ + c) * 2 + r) * lp;
                    const double* w = weight.data.data() + ((static_cast<std::int64_t>(o) * c_in_ + c) * 2 + r) * s_;
                    for (int j = 0; j < s_; ++j) {
                        const double wj = w[j];
                        const double* xs = xr + j;
                        for (std::int64_t t = 0; t < len_; ++t) yr[t] += wj * xs[t];
                    }
                }
        }
    macs += static_cast<std::uint64_t>(batch_) * c_out_ * c_in_ * 2 * s_ * len_;
    check_finite(y, "Conv2dFirst");
    return y;
}

Tensor Conv2dFirst::backward(const Tensor& dy) {
    const int pad = (s_ - 1) / 2;
    const std::int64_t lp = len_ + 2 * pad;
    Tensor dxp = Tensor::zeros({batch_, c_in_, 2, lp});
    for (std::int64_t b = 0; b < batch_; ++b)
        for (int o = 0; o < c_out_; ++o) {
            const double* dyr = dy.data.data() + (b * c_out_ + o) * len_;
            for (int c = 0; c < c_in_; ++c)
                for (int r = 0; r < 2; ++r) {
                    const std::int64_t base = ((static_cast<std::int64_t>(o) * c_in_ + c) * 2 + r) * s_;
                    const double* xr = x_pad_.data.data() + ((b * c_in_ + c) * 2 + r) * lp;
                    double* dxr = dxp.data.data() + ((b * c_in_ + c) * 2 + r) * lp;
                    for (int j = 0; j < s_; ++j) {
                        double acc = 0.0;
                        const double* xs = xr + j;
                        double* dxs = dxr + j;
                        const double wj = weight.data[base + j];
                        for (std::int64_t t = 0; t < len_; ++t) {
                            acc += dyr[t] * xs[t];
                            dxs[t] += wj * dyr[t];
                        }
                        weight.grad[base + j] += acc;
                    }
                }
        }
    Tensor dx = Tensor::zeros({batch_, c_in_, 2, len_});
    for (std::int64_t b = 0; b < batch_; ++b)
        for (int c = 0; c < c_in_; ++c)
            for (int r = 0; r < 2; ++r) {
                const double* src = dxp.data.data() + ((b * c_in_ + c) * 2 + r) * lp + pad;
                double* dst = dx.data.data() + ((b * c_in_ + c) * 2 + r) * len_;
                for (std::int64_t t = 0; t < len_; ++t) dst[t] = src[t];
            }
    return dx;
}

// -------------------------------------------------------------------- Linear

Linear::Linear(int in, int out, common::Rng& init) : in_(in), out_(out) {
    weight = Tensor::zeros({out, in}, true);
    bias = Tensor::zeros({out}, true);
    init_gaussian(weight, static_cast<double>(in), init);
}

Tensor Linear::forward(const Tensor& x) {
    if (x.rank() != 2 || x.dim(1) != in_) throw std::invalid_argument("Linear: expected [B, in]");
    x_ = x;
    const std::int64_t b_n = x.dim(0);
    Tensor y = Tensor::zeros({b_n, out_});
    for (std::int64_t b = 0; b < b_n; ++b) {
        const double* xr = x.data.data() + b * in_;
        double* yr = y.data.data() + b * out_;
        for (int o = 0; o < out_; ++o) {
            const double* w = weight.data.data() + static_cast<std::int64_t>(o) * in_;
            double acc = bias.data[static_cast<std::size_t>(o)];
            for (int i = 0; i < in_; ++i) acc += w[i] * xr[i];
            yr[o] = acc;
        }
    }
    macs += static_cast<std::uint64_t>(b_n) * out_ * in_;
    check_finite(y, "Linear");
    return y;
}

Tensor Linear::backward(const Tensor& dy) {
    const std::int64_t b_n = x_.dim(0);
    Tensor dx = Tensor::zeros({b_n, in_});
    for (std::int64_t b = 0; b < b_n; ++b) {
        const double* dyr = dy.data.data() + b * out_;
        const double* xr = x_.data.data() + b * in_;
        double* dxr = dx.data.data() + b * in_;
        for (int o = 0; o < out_; ++o) {
            const double g = dyr[o];
            if (g == 0.0) continue;
            const double* w = weight.data.data() + static_cast<std::int64_t>(o) * in_;
            double* dw = weight.grad.data() + static_cast<std::int64_t>(o) * in_;
            bias.grad[static_cast<std::size_t>(o)] += g;
            for (int i = 0; i < in_; ++i) {
                dw[i] += g * xr[i];
                dxr[i] += g * w[i];
            }
        }
    }
    return dx;
}

// ----------------------------------------------------------------- BatchNorm

BatchNorm::BatchNorm(int channels) : c_(channels) {
    gamma = Tensor::zeros({channels}, true);
    beta = Tensor::zeros({channels}, true);
    for (auto& v : gamma.data) v = 1.0;
    running_mean.assign(static_cast<std::size_t>(channels), 0.0);
    running_var.assign(static_cast<std::size_t>(channels), 1.0);
}

Tensor BatchNorm::forward(const Tensor& x, bool training) {
    if (x.rank() != 2 && x.rank() != 3) throw std::invalid_argument("BatchNorm: expected [B, C] or [B, C, L]");
    if (x.dim(1) != c_) throw std::invalid_argument("BatchNorm: channel mismatch");
    const std::int64_t b_n = x.dim(0);
    const std::int64_t l = x.rank() == 3 ? x.dim(2) : 1;
    nb_ = b_n * l;
    trained_pass_ = training;
    if (training && nb_ < 2) throw std::invalid_argument("BatchNorm: training needs at least 2 samples per channel");

    xhat_ = Tensor::zeros(x.shape);
    inv_std_.assign(static_cast<std::size_t>(c_), 0.0);
    Tensor y = Tensor::zeros(x.shape);
    for (int c = 0; c < c_; ++c) {
        double mean, var;
        if (training) {
            double s = 0.0;
            for (std::int64_t b = 0; b < b_n; ++b) {
                const double* xr = x.data.data() + (b * c_ + c) * l;
                for (std::int64_t t = 0; t < l; ++t) s += xr[t];
            }
            mean = s / static_cast<double>(nb_);
            double sv = 0.0;
            for (std::int64_t b = 0; b < b_n; ++b) {
                const double* xr = x.data.data() + (b * c_ + c) * l;
                for (std::int64_t t = 0; t < l; ++t) {
                    const double d = xr[t] - mean;
                    sv += d * d;
                }
            }
            var = sv / static_cast<double>(nb_);
            running_mean[static_cast<std::size_t>(c)] =
                (1.0 - momentum) * running_mean[static_cast<std::size_t>(c)] + momentum * mean;
            running_var[static_cast<std::size_t>(c)] =
                (1.0 - momentum) * running_var[static_cast<std::size_t>(c)] + momentum * var;
        } else {
            mean = running_mean[static_cast<std::size_t>(c)];
            var = running_var[static_cast<std::size_t>(c)];
        }
        const double is = 1.0 / std::sqrt(var + eps);
        inv_std_[static_cast<std::size_t>(c)] = is;
        const double g = gamma.data[static_cast<std::size_t>(c)];
        const double be = beta.data[static_cast<std::size_t>(c)];
        for (std::int64_t b = 0; b < b_n; ++b) {
            const double* xr = x.data.data() + (b * c_ + c) * l;
            double* hr = xhat_.data.data() + (b * c_ + c) * l;
            double* yr = y.data.data() + (b * c_ + c) * l;
            for (std::int64_t t = 0; t < l; ++t) {
                hr[t] = (xr[t] - mean) * is;
                yr[t] = g * hr[t] + be;
            }
        }
    }
    check_finite(y, "BatchNorm");
    return y;
}

Tensor BatchNorm::backward(const Tensor& dy) {
    const std::int64_t b_n = dy.dim(0);
    const std::int64_t l = dy.rank() == 3 ? dy.dim(2) : 1;
    Tensor dx = Tensor::zeros(dy.shape);
    for (int c = 0; c < c_; ++c) {
        double sum_dy = 0.0, sum_dyh = 0.0;
        for (std::int64_t b = 0; b < b_n; ++b) {
            const double* dyr = dy.data.data() + (b * c_ + c) * l;
            const double* hr = xhat_.data.data() + (b * c_ + c) * l;
            for (std::int64_t t = 0; t < l; ++t) {
                sum_dy += dyr[t];
                sum_dyh += dyr[t] * hr[t];
            }
        }
        gamma.grad[static_cast<std::size_t>(c)] += sum_dyh;
        beta.grad[static_cast<std::size_t>(c)] += sum_dy;
        const double g = gamma.data[static_cast<std::size_t>(c)];
        const double is = inv_std_[static_cast<std::size_t>(c)];
        const double n = static_cast<double>(nb_);
        for (std::int64_t b = 0; b < b_n; ++b) {
            const double* dyr = dy.data.data() + (b * c_ + c) * l;
            const double* hr = xhat_.data.data() + (b * c_ + c) * l;
            double* dxr = dx.data.data() + (b * c_ + c) * l;
            if (trained_pass_) {
                for (std::int64_t t = 0; t < l; ++t)
                    dxr[t] = g * is * (dyr[t] - sum_dy / n - hr[t] * sum_dyh / n);
            } else {
                for (std::int64_t t = 0; t < l; ++t) dxr[t] = g * is * dyr[t];
            }
        }
    }
    return dx;
}

// ---------------------------------------------------------------- Activation

Tensor Activation::forward(const Tensor& x) {
    x_ = x;
    Tensor y = x;
    switch (kind_) {
        case Act::Selu:
            for (auto& v : y.data) v = selu(v);
            break;
        case Act::HSwish:
            for (auto& v : y.data) v = hswish(v);
            break;
        case Act::Sigmoid:
            for (auto& v : y.data) v = 1.0 / (1.0 + std::exp(-v));
            break;
        case Act::Tanh:
            for (auto& v : y.data) v = std::tanh(v);
            break;
        case Act::Identity:
            break;
    }
    y_ = y;
    check_finite(y, "Activation");
    return y;
}

Tensor Activation::backward(const Tensor& dy) {
    Tensor dx = dy;
    switch (kind_) {
        case Act::Selu:
            for (std::size_t i = 0; i < dx.data.size(); ++i) {
                const double x = x_.data[i];
                dx.data[i] *= x > 0.0 ? kSeluGamma : kSeluGamma * kSeluAlpha * std::exp(x);
            }
            break;
        case Act::HSwish:
            for (std::size_t i = 0; i < dx.data.size(); ++i) {
                const double x = x_.data[i];
                double d;
                if (x <= -3.0)
                    d = 0.0;
                else if (x >= 3.0)
                    d = 1.0;
                else
                    d = (2.0 * x + 3.0) / 6.0;
                dx.data[i] *= d;
            }
            break;
        case Act::Sigmoid:
            for (std::size_t i = 0; i < dx.data.size(); ++i) {
                const double y = y_.data[i];
                dx.data[i] *= y * (1.0 - y);
            }
            break;
        case Act::Tanh:
            for (std::size_t i = 0; i < dx.data.size(); ++i) {
                const double y = y_.data[i];
                dx.data[i] *= 1.0 - y * y;
            }
            break;
        case Act::Identity:
            break;
    }
    return dx;
}

// ------------------------------------------------------------ SoftmaxChannel

Tensor SoftmaxChannel::forward(const Tensor& x) {
    if (x.rank() != 2 && x.rank() != 3) throw std::invalid_argument("SoftmaxChannel: expected [B, M] or [B, M, L]");
    const std::int64_t b_n = x.dim(0), m_n = x.dim(1);
    const std::int64_t l = x.rank() == 3 ? x.dim(2) : 1;
    Tensor y = Tensor::zeros(x.shape);
    for (std::int64_t b = 0; b < b_n; ++b)
        for (std::int64_t t = 0; t < l; ++t) {
            double mx = -1e300;
            for (std::int64_t m = 0; m < m_n; ++m) mx = std::max(mx, x.data[(b * m_n + m) * l + t]);
            double z = 0.0;
            for (std::int64_t m = 0; m < m_n; ++m) {
                const double e = std::exp(x.data[(b * m_n + m) * l + t] - mx);
                y.data[(b * m_n + m) * l + t] = e;
                z += e;
            }
            for (std::int64_t m = 0; m < m_n; ++m) y.data[(b * m_n + m) * l + t] /= z;
        }
    y_ = y;
    return y;
}

Tensor SoftmaxChannel::backward(const Tensor& dy) {
    const std::int64_t b_n = dy.dim(0), m_n = dy.dim(1);
    const std::int64_t l = dy.rank() == 3 ? dy.dim(2) : 1;
    Tensor dx = Tensor::zeros(dy.shape);
    for (std::int64_t b = 0; b < b_n; ++b)
        for (std::int64_t t = 0; t < l; ++t) {
            double dot = 0.0;
            for (std::int64_t m = 0; m < m_n; ++m)
                dot += y_.data[(b * m_n + m) * l + t] * dy.data[(b * m_n + m) * l + t];
            for (std::int64_t m = 0; m < m_n; ++m) {
                const std::int64_t i = (b * m_n + m) * l + t;
                dx.data[i] = y_.data[i] * (dy.data[i] - dot);
            }
        }
    return dx;
}

// ---------------------------------------------------------------- ChannelSum

Tensor ChannelSum::forward(const Tensor& x) {
    if (x.rank() != 3) throw std::invalid_argument("ChannelSum: expected [B, C, L]");
    const std::int64_t b_n = x.dim(0), l = x.dim(2);
    c_ = x.dim(1);
    Tensor y = Tensor::zeros({b_n, 1, l});
    for (std::int64_t b = 0; b < b_n; ++b)
        for (std::int64_t c = 0; c < c_; ++c) {
            const double* xr = x.data.data() + (b * c_ + c) * l;
            double* yr = y.data.data() + b * l;
            for (std::int64_t t = 0; t < l; ++t) yr[t] += xr[t];
        }
    return y;
}

Tensor ChannelSum::backward(const Tensor& dy) {
    const std::int64_t b_n = dy.dim(0), l = dy.dim(2);
    Tensor dx = Tensor::zeros({b_n, c_, l});
    for (std::int64_t b = 0; b < b_n; ++b)
        for (std::int64_t c = 0; c < c_; ++c) {
            const double* dyr = dy.data.data() + b * l;
            double* dxr = dx.data.data() + (b * c_ + c) * l;
            for (std::int64_t t = 0; t < l; ++t) dxr[t] = dyr[t];
        }
    return dx;
}

// ---------------------------------------------------------------- ScalarSkip

ScalarSkip::ScalarSkip() { a = Tensor::zeros({1}, true); }

Tensor ScalarSkip::forward(const Tensor& x, const Tensor& skip) {
    if (x.numel() != skip.numel()) throw std::invalid_argument("ScalarSkip: shape mismatch");
    skip_ = skip;
    Tensor y = x;
    const double av = a.data[0];
    for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] += av * skip.data[i];
    return y;
}

Tensor ScalarSkip::backward(const Tensor& dy) {
    double da = 0.0;
    d_skip_ = dy;
    const double av = a.data[0];
    for (std::size_t i = 0; i < dy.data.size(); ++i) {
        da += dy.data[i] * skip_.data[i];
        d_skip_.data[i] = av * dy.data[i];
    }
    a.grad[0] += da;
    return dy;
}

// ----------------------------------------------------------------- PowerNorm

Tensor PowerNorm::forward(const Tensor& u, const Tensor& powers) {
    if (u.rank() != 3) throw std::invalid_argument("PowerNorm: expected [B, K, N]");
    if (powers.rank() != 2 || powers.dim(0) != u.dim(0) || powers.dim(1) != u.dim(1))
        throw std::invalid_argument("PowerNorm: powers must be [B, K]");
    const std::int64_t b_n = u.dim(0), k_n = u.dim(1), n = u.dim(2);
    powers_ = powers;
    w_ = Tensor::zeros(u.shape);
    v_ = Tensor::zeros(u.shape);
    scale_.assign(static_cast<std::size_t>(b_n * k_n), 0.0);
    wss_.assign(static_cast<std::size_t>(b_n * k_n), 0.0);
    for (std::int64_t b = 0; b < b_n; ++b)
        for (std::int64_t k = 0; k < k_n; ++k) {
            const double* ur = u.data.data() + (b * k_n + k) * n;
            double* wr = w_.data.data() + (b * k_n + k) * n;
            double* vr = v_.data.data() + (b * k_n + k) * n;
            double mean = 0.0;
            for (std::int64_t t = 0; t < n; ++t) mean += ur[t];
            mean /= static_cast<double>(n);
            double ss = 0.0;
            for (std::int64_t t = 0; t < n; ++t) {
                wr[t] = ur[t] - mean;
                ss += wr[t] * wr[t];
            }
            ss = std::max(ss, 1e-300);
            const double p = powers.data[static_cast<std::size_t>(b * k_n + k)];
            if (!(p > 0.0)) throw std::invalid_argument("PowerNorm: target power must be > 0");
            const double c = std::sqrt(static_cast<double>(n) * p / ss);
            scale_[static_cast<std::size_t>(b * k_n + k)] = c;
            wss_[static_cast<std::size_t>(b * k_n + k)] = ss;
            for (std::int64_t t = 0; t < n; ++t) vr[t] = c * wr[t];
        }
    check_finite(v_, "PowerNorm");
    return v_;
}

Tensor PowerNorm::backward(const Tensor& dv) {
    const std::int64_t b_n = dv.dim(0), k_n = dv.dim(1), n = dv.dim(2);
    Tensor du = Tensor::zeros(dv.shape);
    d_powers_ = Tensor::zeros({b_n, k_n});
    for (std::int64_t b = 0; b < b_n; ++b)
        for (std::int64_t k = 0; k < k_n; ++k) {
            const std::size_t rk = static_cast<std::size_t>(b * k_n + k);
            const double* g = dv.data.data() + (b * k_n + k) * n;
            const double* wr = w_.data.data() + (b * k_n + k) * n;
            const double* vr = v_.data.data() + (b * k_n + k) * n;
            double* dur = du.data.data() + (b * k_n + k) * n;
            const double c = scale_[rk];
            const double ss = wss_[rk];
            double gsum = 0.0, gw = 0.0, gv = 0.0;
            for (std::int64_t t = 0; t < n; ++t) {
                gsum += g[t];
                gw += g[t] * wr[t];
                gv += g[t] * vr[t];
            }
            const double gmean = gsum / static_cast<double>(n);
            for (std::int64_t t = 0; t < n; ++t)
                dur[t] = c * (g[t] - gmean) - (c / ss) * wr[t] * gw;
            const double p = powers_.data[rk];
            d_powers_.data[rk] = gv / (2.0 * p);
        }
    return du;
}

} // namespace tnoma::nn
