#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "tnoma/channel/apply.hpp"
#include "tnoma/channel/channel_matrix.hpp"
#include "tnoma/channel/crosscorr.hpp"
#include "tnoma/channel/impairments.hpp"
#include "tnoma/channel/matched_filter.hpp"
#include "tnoma/channel/noise.hpp"
#include "tnoma/channel/pulse.hpp"
#include "tnoma/common/rng.hpp"

using namespace tnoma;

namespace {

// numerical correlation of two unit-energy root-raised-cosine pulses
double rc_by_convolution(double t, double beta, int oversample = 64, double support = 40.0) {
    const double dt = 1.0 / oversample;
    double acc = 0.0;
    for (double u = -support; u <= support; u += dt)
        acc += channel::root_raised_cosine(u, beta) * channel::root_raised_cosine(u - t, beta);
    return acc * dt;
}

std::vector<double> random_bpsk(std::size_t n, common::Rng& rng) {
    std::vector<double> x(n);
    for (auto& v : x) v = rng.next_u64() & 1 ? 1.0 : -1.0;
    return x;
}

} // namespace

TEST_CASE("raised cosine closed form") {
    CHECK(channel::raised_cosine(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(channel::raised_cosine(1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::fabs(channel::raised_cosine(2.0, 0.35)) < 1e-12);  // integer zero crossings

    // removable singularity and generic points against the convolution oracle
    for (double beta : {1.0, 0.5, 0.22}) {
        for (double t : {0.0, 0.3, 0.5, 1.0 / (2.0 * beta), 1.7, 2.4}) {
            const double oracle = rc_by_convolution(t, beta);
            CHECK(channel::raised_cosine(t, beta) == doctest::Approx(oracle).epsilon(2e-6));
        }
    }
    CHECK(channel::raised_cosine(0.5, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("root raised cosine is unit energy") {
    for (double beta : {1.0, 0.5}) {
        const double e = rc_by_convolution(0.0, beta);
        CHECK(e == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("cross-correlation bank normalization and symmetry") {
    channel::PulseSpec pulse{1.0, 7};
    auto bank = channel::CrossCorrBank::build(pulse, {0.5, 0.0});
    const int s = bank.half_span();
    for (int l = 0; l < 2; ++l)
        for (int k = 0; k < 2; ++k) {
            double e = 0.0;
            for (int m = -s; m <= s; ++m) e += bank.tap(l, k, m) * bank.tap(l, k, m);
            CHECK(std::fabs(e - 1.0) < 1e-12);
            // transpose symmetry
            for (int m = -s; m <= s; ++m)
                CHECK(bank.tap(l, k, m) == doctest::Approx(bank.tap(k, l, -m)).epsilon(1e-13));
        }
    // center tap dominates its own sequence
    for (int l = 0; l < 2; ++l) {
        double mx = 0.0;
        for (int m = -s; m <= s; ++m) mx = std::max(mx, std::fabs(bank.tap(l, l, m)));
        CHECK(bank.tap(l, l, 0) == doctest::Approx(mx));
    }
    CHECK(bank.interference_gain(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("timing error perturbs only cross pairs, against the scalar oracle") {
    channel::PulseSpec pulse{1.0, 7};
    auto nominal = channel::CrossCorrBank::build(pulse, {0.5, 0.0}, 0.0);
    auto shifted = channel::CrossCorrBank::build(pulse, {0.5, 0.0}, 0.04);
    const int s = nominal.half_span();

    // zero perturbation reproduces the nominal bank exactly
    auto again = channel::CrossCorrBank::build(pulse, {0.5, 0.0}, 0.0);
    for (int l = 0; l < 2; ++l)
        for (int k = 0; k < 2; ++k)
            for (int m = -s; m <= s; ++m) CHECK(again.tap(l, k, m) == nominal.tap(l, k, m));

    // diagonals stay nominal under the perturbation
    for (int l = 0; l < 2; ++l)
        for (int m = -s; m <= s; ++m) CHECK(shifted.tap(l, l, m) == nominal.tap(l, l, m));

    // direct evaluation oracle for the perturbed cross tap
    double norm = 0.0;
    for (int m = -s; m <= s; ++m) {
        const double g = channel::raised_cosine(m + 0.5, 1.0);
        norm += g * g;
    }
    norm = std::sqrt(norm);
    const double oracle = channel::raised_cosine(0.5 + 0.04, 1.0) / norm;
    CHECK(shifted.tap(0, 1, 0) == doctest::Approx(oracle).epsilon(1e-13));
}

TEST_CASE("channel matrix: single-user impulse recovers the kernel") {
    channel::PulseSpec pulse{0.5, 5};
    auto bank = channel::CrossCorrBank::build(pulse, {0.0});
    const int n = 16;
    auto g = channel::ChannelMatrix::build(bank, n);
    CHECK(g.rows() == n - 4);
    CHECK(g.cols() == n);
    std::vector<double> x(n, 0.0), y(static_cast<std::size_t>(g.rows()));
    const int c = 8;
    x[c] = 1.0;
    g.apply(x, y);
    const int s = bank.half_span();
    for (int m = 0; m < g.rows(); ++m) {
        const int lag = m + s - c;
        const double expect = (lag >= -s && lag <= s) ? bank.tap(0, 0, lag) : 0.0;
        CHECK(y[static_cast<std::size_t>(m)] == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("channel matrix equals the direct double-sum and the banded path") {
    channel::PulseSpec pulse{1.0, 3};
    auto bank = channel::CrossCorrBank::build(pulse, {0.5, 0.0});
    const int n = 8, k = 2, s = bank.half_span();
    const int nv = n - 2 * s;
    auto g = channel::ChannelMatrix::build(bank, n);
    common::Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        auto x = random_bpsk(static_cast<std::size_t>(k * n), rng);
        std::vector<double> y_mat(static_cast<std::size_t>(k * nv));
        common::matvec(g.dense(), x, y_mat);
        std::vector<double> y_band(y_mat.size());
        g.apply(x, y_band);
        // direct evaluation of the superposed convolutions, valid outputs only
        for (int l = 0; l < k; ++l)
            for (int m = 0; m < nv; ++m) {
                double acc = 0.0;
                for (int kk = 0; kk < k; ++kk)
                    for (int nn = 0; nn < n; ++nn) {
                        const int lag = (m + s) - nn;
                        if (lag < -s || lag > s) continue;
                        acc += bank.tap(l, kk, lag) * x[static_cast<std::size_t>(nn * k + kk)];
                    }
                CHECK(std::fabs(acc - y_mat[static_cast<std::size_t>(l * nv + m)]) < 1e-12);
                CHECK(std::fabs(acc - y_band[static_cast<std::size_t>(l * nv + m)]) < 1e-12);
            }
    }
}

TEST_CASE("channel matrix shape and cached factorization invariants") {
    channel::PulseSpec pulse{1.0, 7};
    auto bank = channel::CrossCorrBank::build(pulse, {0.5, 0.0});
    auto g = channel::ChannelMatrix::build(bank, 64);
    CHECK(g.rows() == 2 * 58);
    CHECK(g.cols() == 2 * 64);

    const auto& f = g.svd();
    // reconstruction
    double max_err = 0.0;
    for (std::int64_t r = 0; r < g.rows(); ++r)
        for (std::int64_t c = 0; c < g.cols(); ++c) {
            double acc = 0.0;
            for (std::size_t i = 0; i < f.sigma.size(); ++i)
                acc += f.u(r, static_cast<std::int64_t>(i)) * f.sigma[i] * f.vt(static_cast<std::int64_t>(i), c);
            max_err = std::max(max_err, std::fabs(acc - g.dense()(r, c)));
        }
    CHECK(max_err < 1e-9);
    // ordered, nonnegative spectrum
    for (std::size_t i = 1; i < f.sigma.size(); ++i) CHECK(f.sigma[i] <= f.sigma[i - 1] + 1e-15);
    CHECK(f.sigma.back() >= -1e-15);
    // orthonormal columns
    for (int trial = 0; trial < 16; ++trial) {
        const std::int64_t a = trial % f.u.cols, b = (trial * 7 + 3) % f.u.cols;
        double dot = 0.0;
        for (std::int64_t r = 0; r < f.u.rows; ++r) dot += f.u(r, a) * f.u(r, b);
        CHECK(std::fabs(dot - (a == b ? 1.0 : 0.0)) < 1e-10);
    }

    // full-size shape check
    auto g2 = channel::ChannelMatrix::build(bank, 512);
    CHECK(g2.rows() == 2 * 506);
    CHECK(g2.cols() == 2 * 512);
}

TEST_CASE("banded apply adjoint identity") {
    channel::PulseSpec pulse{1.0, 7};
    auto bank = channel::CrossCorrBank::build(pulse, {0.5, 0.0});
    const int n = 32, k = 2;
    const int nv = channel::valid_outputs(bank, n);
    common::Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> a(static_cast<std::size_t>(k * n)), b(static_cast<std::size_t>(k * nv));
        for (auto& v : a) v = rng.gaussian();
        for (auto& v : b) v = rng.gaussian();
        std::vector<double> ga(b.size()), gtb(a.size());
        channel::banded_apply(bank, n, a, ga);
        channel::banded_apply_adjoint(bank, n, b, gtb);
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) lhs += ga[i] * b[i];
        for (std::size_t i = 0; i < a.size(); ++i) rhs += a[i] * gtb[i];
        CHECK(std::fabs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("matched filter oracle agrees with the raw-tap channel") {
    channel::PulseSpec pulse{1.0, 7};
    auto bank = channel::CrossCorrBank::build(pulse, {0.5, 0.0});
    const int n = 16;
    const int nv = channel::valid_outputs(bank, n);
    common::Rng rng(3);

    // single user, single centered symbol: peak equals g(0)
    {
        channel::PulseSpec p1{1.0, 7};
        std::vector<double> x(static_cast<std::size_t>(n), 0.0);
        x[8] = 1.0;
        const double offs[1] = {0.0};
        auto y = channel::matched_filter_oracle(x, p1, offs, n, 64);
        double peak = 0.0;
        for (double v : y) peak = std::max(peak, std::fabs(v));
        CHECK(peak == doctest::Approx(1.0).epsilon(1e-4));
    }

    for (int trial = 0; trial < 5; ++trial) {
        auto x1 = random_bpsk(static_cast<std::size_t>(n), rng);
        auto x2 = random_bpsk(static_cast<std::size_t>(n), rng);
        if (trial == 4) x2.assign(x2.size(), 0.0);  // degenerate one-user superposition
        auto oracle = channel::matched_filter_oracle2(x1, x2, pulse, 0.5, 0.0, 64);

        std::vector<double> xi(static_cast<std::size_t>(2 * n));
        for (int i = 0; i < n; ++i) {
            xi[static_cast<std::size_t>(2 * i)] = x1[static_cast<std::size_t>(i)];
            xi[static_cast<std::size_t>(2 * i + 1)] = x2[static_cast<std::size_t>(i)];
        }
        std::vector<double> y(static_cast<std::size_t>(2 * nv));
        channel::banded_apply(bank, n, xi, y, /*normalized=*/false);
        for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::fabs(y[i] - oracle[i]) < 1e-4);
    }
}

TEST_CASE("colored noise matches the analytic covariance") {
    channel::PulseSpec pulse{1.0, 7};
    auto bank = channel::CrossCorrBank::build(pulse, {0.5, 0.0});
    const int n = 17;
    auto colorer = channel::NoiseColorer::build(bank, n);
    const int dim = colorer.dim();
    const int nv = dim / 2;
    const double n0 = 0.5;

    const int frames = 100000;
    // accumulate complex products for a few representative index pairs
    struct Pair { int i, j; };
    std::vector<Pair> pairs = {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {nv, 0}, {nv + 1, 0}, {nv, 1}, {5, 5}, {nv + 4, 4}};
    std::vector<std::complex<double>> acc(pairs.size(), {0.0, 0.0});
    common::Rng rng(2024);
    std::vector<std::complex<double>> y(static_cast<std::size_t>(dim));
    for (int f = 0; f < frames; ++f) {
        for (auto& v : y) v = {0.0, 0.0};
        colorer.add_noise(y, n0, rng);
        for (std::size_t p = 0; p < pairs.size(); ++p)
            acc[p] += y[static_cast<std::size_t>(pairs[p].i)] * std::conj(y[static_cast<std::size_t>(pairs[p].j)]);
    }
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto est = acc[p] / static_cast<double>(frames);
        const double expect = n0 * colorer.covariance_entry(pairs[p].i, pairs[p].j);
        const double se = 3.0 * n0 / std::sqrt(static_cast<double>(frames));
        CHECK(std::fabs(est.real() - expect) < se);
        CHECK(std::fabs(est.imag()) < se);
    }
}

TEST_CASE("whitening round trip is Kolmogorov-Smirnov clean") {
    channel::PulseSpec pulse{1.0, 7};
    auto bank = channel::CrossCorrBank::build(pulse, {0.5, 0.0});
    const int n = 56;
    auto colorer = channel::NoiseColorer::build(bank, n);
    const int dim = colorer.dim();

    common::Rng rng(99);
    std::vector<double> samples;
    samples.reserve(100000);
    std::vector<double> w(static_cast<std::size_t>(dim));
    while (samples.size() < 100000) {
        for (auto& v : w) v = rng.gaussian();
        colorer.color(w);
        colorer.whiten(w);
        for (double v : w) samples.push_back(v);
    }
    std::sort(samples.begin(), samples.end());
    const double nn = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-samples[i] * 0.7071067811865476);
        d = std::max(d, std::fabs(cdf - (static_cast<double>(i) + 0.5) / nn));
    }
    const double t = d * (std::sqrt(nn) + 0.12 + 0.11 / std::sqrt(nn));
    double pval = 0.0;
    for (int kk = 1; kk <= 100; ++kk) pval += 2.0 * (kk % 2 ? 1.0 : -1.0) * std::exp(-2.0 * kk * kk * t * t);
    CHECK(pval > 0.01);
}

TEST_CASE("apply_channel: linearity, noise-only covariance hooks, input checks") {
    channel::PulseSpec pulse{1.0, 7};
    auto bank = channel::CrossCorrBank::build(pulse, {0.5, 0.0});
    const int n = 32;
    auto g = channel::ChannelMatrix::build(bank, n);
    common::Rng rng(5);

    // impulse through the noise-free channel picks out a matrix column
    std::vector<double> v(static_cast<std::size_t>(2 * n), 0.0), p(v.size(), 1.0);
    const int col = 2 * 15;
    v[static_cast<std::size_t>(col)] = 1.0;
    auto y = channel::apply_channel(v, p, g, {1.0, 0.0}, nullptr, 30.0, rng);
    for (std::int64_t r = 0; r < g.rows(); ++r)
        CHECK(y[static_cast<std::size_t>(r)].real() == doctest::Approx(g.dense()(r, col)).epsilon(1e-12));

    // power scaling enters as an amplitude
    std::vector<double> p4(v.size(), 4.0);
    auto y4 = channel::apply_channel(v, p4, g, {1.0, 0.0}, nullptr, 30.0, rng);
    for (std::size_t i = 0; i < y.size(); ++i)
        CHECK(y4[i].real() == doctest::Approx(2.0 * y[i].real()).epsilon(1e-12));

    v[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS(channel::apply_channel(v, p, g, {1.0, 0.0}, nullptr, 30.0, rng));
}

TEST_CASE("fading and impairment draws") {
    common::Rng rng(11);
    double e2 = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        auto f = channel::draw_fading(2, rng);
        e2 += std::norm(f.h[0]);
    }
    e2 /= draws;
    CHECK(std::fabs(e2 - 1.0) < 0.02);

    // reproducibility from the seed
    auto r1 = common::Rng::derive(123, 4, 5);
    auto r2 = common::Rng::derive(123, 4, 5);
    auto d1 = channel::draw_impairments(2, 0.08, 0.01, r1);
    auto d2 = channel::draw_impairments(2, 0.08, 0.01, r2);
    CHECK(d1.timing_error == d2.timing_error);
    CHECK(d1.csi_error_tx[0] == d2.csi_error_tx[0]);

    // disabled impairments vanish exactly
    auto off = channel::draw_impairments(2, 0.0, 0.0, rng);
    CHECK(off.timing_error == 0.0);
    CHECK(off.csi_error_rx[1] == std::complex<double>(0.0, 0.0));

    // width 16% of the T/2 design offset keeps |eps| <= 0.04
    common::Rng rw(17);
    double emax = 0.0;
    for (int i = 0; i < 20000; ++i) {
        auto d = channel::draw_impairments(2, 0.16 * 0.5, 0.0, rw);
        emax = std::max(emax, std::fabs(d.timing_error));
    }
    CHECK(emax <= 0.04);
    CHECK(emax > 0.035);

    // CSI error variance estimate within 3 standard errors at 1e6 draws
    common::Rng rc(19);
    double v = 0.0;
    const int nd = 1000000;
    for (int i = 0; i < nd; ++i) {
        auto d = channel::draw_impairments(1, 0.0, 0.01, rc);
        v += std::norm(d.csi_error_tx[0]);
    }
    v /= nd;
    CHECK(std::fabs(v - 0.01) < 3.0 * 0.01 / std::sqrt(static_cast<double>(nd)));

    // shared draw flag reuses the transmit-side errors
    auto ds = channel::draw_impairments(2, 0.0, 0.01, rc, true);
    CHECK(ds.csi_error_rx[0] == ds.csi_error_tx[0]);
}
