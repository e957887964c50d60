#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "tnoma/common/rng.hpp"
#include "tnoma/nn/adam.hpp"
#include "tnoma/nn/checkpoint.hpp"
#include "tnoma/nn/layers.hpp"
#include "tnoma/nn/losses.hpp"
#include "tnoma/nn/tensor.hpp"

using namespace tnoma;
using nn::Tensor;

namespace {

Tensor random_tensor(std::vector<std::int64_t> shape, common::Rng& rng, double scale = 1.0) {
    Tensor t = Tensor::zeros(std::move(shape));
    for (auto& v : t.data) v = scale * rng.gaussian();
    return t;
}

// central finite differences of loss() against the gradient already stored in t
void fd_against(Tensor& t, const std::function<double()>& loss, double tol = 1e-4, double h = 1e-5) {
    for (std::size_t i = 0; i < t.data.size(); ++i) {
        const double save = t.data[i];
        t.data[i] = save + h;
        const double lp = loss();
        t.data[i] = save - h;
        const double lm = loss();
        t.data[i] = save;
        const double fd = (lp - lm) / (2.0 * h);
        const double an = t.grad[i];
        const double rel = std::fabs(fd - an) / std::max(1e-6, std::fabs(fd) + std::fabs(an));
        CHECK(rel < tol);
    }
}

double weighted_sum(const Tensor& y, const Tensor& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.data.size(); ++i) s += y.data[i] * c.data[i];
    return s;
}

} // namespace

TEST_CASE("conv1d: identity kernel and the direct triple-loop oracle") {
    common::Rng rng(1);
    {
        nn::Conv1dBank conv(1, 1, 3, rng);
        conv.weight.data = {0.0, 1.0, 0.0};
        auto x = random_tensor({2, 1, 7}, rng);
        auto y = conv.forward(x);
        for (std::size_t i = 0; i < x.data.size(); ++i) CHECK(y.data[i] == doctest::Approx(x.data[i]).epsilon(1e-15));
    }
    {
        const int c_in = 2, c_out = 3, s = 3, l = 9, b = 2;
        nn::Conv1dBank conv(c_in, c_out, s, rng);
        auto x = random_tensor({b, c_in, l}, rng);
        auto y = conv.forward(x);
        const int pad = (s - 1) / 2;
        for (int bb = 0; bb < b; ++bb)
            for (int o = 0; o < c_out; ++o)
                for (int t = 0; t < l; ++t) {
                    double acc = 0.0;
                    for (int c = 0; c < c_in; ++c)
                        for (int j = 0; j < s; ++j) {
                            const int u = t + j - pad;
                            if (u < 0 || u >= l) continue;
                            acc += conv.weight.data[static_cast<std::size_t>((o * c_in + c) * s + j)] *
                                   x.data[static_cast<std::size_t>((bb * c_in + c) * l + u)];
                        }
                    CHECK(std::fabs(acc - y.data[static_cast<std::size_t>((bb * c_out + o) * l + t)]) < 1e-12);
                }
    }
}

TEST_CASE("conv1d gradients match finite differences") {
    common::Rng rng(2);
    nn::Conv1dBank conv(2, 3, 3, rng);
    Tensor x = random_tensor({2, 2, 9}, rng);
    x.set_requires_grad(true);
    Tensor c = random_tensor({2, 3, 9}, rng);
    auto loss = [&]() { return weighted_sum(conv.forward(x), c); };
    conv.weight.zero_grad();
    conv.forward(x);
    Tensor dx = conv.backward(c);
    fd_against(conv.weight, loss, 1e-5);
    for (std::size_t i = 0; i < x.data.size(); ++i) x.grad[i] = dx.data[i];
    fd_against(x, loss, 1e-5);
}

TEST_CASE("conv2d-first: degenerate real case, oracle, gradients") {
    common::Rng rng(3);
    const int s = 5, l = 11;
    nn::Conv2dFirst c2(1, 2, s, rng);
    nn::Conv1dBank c1(1, 2, s, rng);
    // zero imaginary row and zero imaginary kernel row reduce to conv1d
    for (int o = 0; o < 2; ++o)
        for (int j = 0; j < s; ++j) {
            c1.weight.data[static_cast<std::size_t>(o * s + j)] =
                c2.weight.data[static_cast<std::size_t>((o * 2 + 0) * s + j)];
            c2.weight.data[static_cast<std::size_t>((o * 2 + 1) * s + j)] = 0.0;
        }
    Tensor xr = random_tensor({2, 1, l}, rng);
    Tensor x2 = Tensor::zeros({2, 1, 2, l});
    for (int b = 0; b < 2; ++b)
        for (int t = 0; t < l; ++t)
            x2.data[static_cast<std::size_t>((b * 2 + 0) * l + t)] = xr.data[static_cast<std::size_t>(b * l + t)];
    auto y2 = c2.forward(x2);
    auto y1 = c1.forward(xr);
    for (std::size_t i = 0; i < y1.data.size(); ++i) CHECK(std::fabs(y1.data[i] - y2.data[i]) < 1e-12);

    // direct sum oracle for the full 2-row case with two complex channels
    nn::Conv2dFirst cf(2, 3, 3, rng);
    Tensor x = random_tensor({2, 2, 2, 7}, rng);
    auto y = cf.forward(x);
    const int pad = 1;
    for (int b = 0; b < 2; ++b)
        for (int o = 0; o < 3; ++o)
            for (int t = 0; t < 7; ++t) {
                double acc = 0.0;
                for (int c = 0; c < 2; ++c)
                    for (int r = 0; r < 2; ++r)
                        for (int j = 0; j < 3; ++j) {
                            const int u = t + j - pad;
                            if (u < 0 || u >= 7) continue;
                            acc += cf.weight.data[static_cast<std::size_t>(((o * 2 + c) * 2 + r) * 3 + j)] *
                                   x.data[static_cast<std::size_t>(((b * 2 + c) * 2 + r) * 7 + u)];
                        }
                CHECK(std::fabs(acc - y.data[static_cast<std::size_t>((b * 3 + o) * 7 + t)]) < 1e-12);
            }

    Tensor cw = random_tensor({2, 3, 7}, rng);
    auto loss = [&]() { return weighted_sum(cf.forward(x), cw); };
    cf.weight.zero_grad();
    cf.forward(x);
    Tensor dx = cf.backward(cw);
    fd_against(cf.weight, loss, 1e-5);
    x.set_requires_grad(true);
    for (std::size_t i = 0; i < x.data.size(); ++i) x.grad[i] = dx.data[i];
    fd_against(x, loss, 1e-5);
}

TEST_CASE("activations: fixed values and asymptotes") {
    CHECK(nn::selu(0.0) == 0.0);
    CHECK(nn::selu(1e-9) / 1e-9 == doctest::Approx(1.0507009873554805).epsilon(1e-9));
    CHECK(nn::selu(-40.0) == doctest::Approx(-1.0507009873554805 * 1.6732632423543773).epsilon(1e-12));
    CHECK(nn::hswish(3.0) == doctest::Approx(3.0));
    CHECK(nn::hswish(-3.0) == doctest::Approx(0.0));
    CHECK(nn::hswish(-5.0) == 0.0);
    CHECK(nn::hswish(1.0) == doctest::Approx(4.0 / 6.0));

    common::Rng rng(4);
    for (auto kind : {nn::Act::Selu, nn::Act::HSwish, nn::Act::Sigmoid, nn::Act::Tanh}) {
        nn::Activation act(kind);
        Tensor x = random_tensor({2, 3, 5}, rng);
        Tensor c = random_tensor({2, 3, 5}, rng);
        auto loss = [&]() { return weighted_sum(act.forward(x), c); };
        act.forward(x);
        Tensor dx = act.backward(c);
        x.set_requires_grad(true);
        for (std::size_t i = 0; i < x.data.size(); ++i) x.grad[i] = dx.data[i];
        fd_against(x, loss, 1e-4);
    }
}

TEST_CASE("selu keeps unit-Gaussian activations standardized") {
    common::Rng rng(5);
    double s = 0.0, s2 = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const double y = nn::selu(rng.gaussian());
        s += y;
        s2 += y * y;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(mean > -0.05);
    CHECK(mean < 0.05);
    CHECK(var > 0.9);
    CHECK(var < 1.1);
}

TEST_CASE("batch norm: constant input, standardization, gradients, inference") {
    common::Rng rng(6);
    nn::BatchNorm bn(3);
    // constant input collapses to the shift
    Tensor xc = Tensor::zeros({4, 3, 5});
    for (auto& v : xc.data) v = 2.5;
    for (int c = 0; c < 3; ++c) bn.beta.data[static_cast<std::size_t>(c)] = 0.3 * (c + 1);
    auto yc = bn.forward(xc, true);
    for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 3; ++c)
            for (int t = 0; t < 5; ++t)
                CHECK(yc.data[static_cast<std::size_t>((b * 3 + c) * 5 + t)] ==
                      doctest::Approx(0.3 * (c + 1)).epsilon(1e-9));

    nn::BatchNorm bn2(2);
    Tensor x = random_tensor({8, 2, 9}, rng, 2.0);
    auto y = bn2.forward(x, true);
    for (int c = 0; c < 2; ++c) {
        double m = 0.0, v = 0.0;
        for (int b = 0; b < 8; ++b)
            for (int t = 0; t < 9; ++t) m += y.data[static_cast<std::size_t>((b * 2 + c) * 9 + t)];
        m /= 72.0;
        for (int b = 0; b < 8; ++b)
            for (int t = 0; t < 9; ++t) {
                const double d = y.data[static_cast<std::size_t>((b * 2 + c) * 9 + t)] - m;
                v += d * d;
            }
        v /= 72.0;
        CHECK(std::fabs(m) < 1e-6);
        CHECK(std::fabs(v - 1.0) < 1e-3);
    }

    Tensor c = random_tensor({8, 2, 9}, rng);
    auto loss = [&]() { return weighted_sum(bn2.forward(x, true), c); };
    bn2.gamma.zero_grad();
    bn2.beta.zero_grad();
    // keep running stats frozen during the finite-difference probes
    const double mom = bn2.momentum;
    bn2.momentum = 0.0;
    bn2.forward(x, true);
    Tensor dx = bn2.backward(c);
    fd_against(bn2.gamma, loss, 1e-4);
    fd_against(bn2.beta, loss, 1e-4);
    x.set_requires_grad(true);
    for (std::size_t i = 0; i < x.data.size(); ++i) x.grad[i] = dx.data[i];
    fd_against(x, loss, 1e-4);
    bn2.momentum = mom;

    // inference path uses the running statistics
    auto ye = bn2.forward(x, false);
    for (int cc = 0; cc < 2; ++cc) {
        const double is = 1.0 / std::sqrt(bn2.running_var[static_cast<std::size_t>(cc)] + bn2.eps);
        const double expect = bn2.gamma.data[static_cast<std::size_t>(cc)] *
                                  (x.data[static_cast<std::size_t>(cc * 9)] -
                                   bn2.running_mean[static_cast<std::size_t>(cc)]) * is +
                              bn2.beta.data[static_cast<std::size_t>(cc)];
        CHECK(ye.data[static_cast<std::size_t>(cc * 9)] == doctest::Approx(expect).epsilon(1e-12));
    }

    Tensor tiny = Tensor::zeros({1, 3, 1});
    CHECK_THROWS(bn.forward(tiny, true));
}

TEST_CASE("linear, softmax, channel sum, scalar skip, power norm") {
    common::Rng rng(7);
    {
        nn::Linear lin(4, 3, rng);
        Tensor x = random_tensor({5, 4}, rng);
        Tensor c = random_tensor({5, 3}, rng);
        auto loss = [&]() { return weighted_sum(lin.forward(x), c); };
        lin.forward(x);
        Tensor dx = lin.backward(c);
        fd_against(lin.weight, loss, 1e-5);
        fd_against(lin.bias, loss, 1e-5);
        x.set_requires_grad(true);
        for (std::size_t i = 0; i < x.data.size(); ++i) x.grad[i] = dx.data[i];
        fd_against(x, loss, 1e-5);
    }
    {
        nn::SoftmaxChannel sm;
        Tensor x = random_tensor({3, 4}, rng, 2.0);
        auto y = sm.forward(x);
        for (int b = 0; b < 3; ++b) {
            double s = 0.0;
            for (int m = 0; m < 4; ++m) s += y.data[static_cast<std::size_t>(b * 4 + m)];
            CHECK(std::fabs(s - 1.0) < 1e-12);
        }
        Tensor c = random_tensor({3, 4}, rng);
        auto loss = [&]() { return weighted_sum(sm.forward(x), c); };
        sm.forward(x);
        Tensor dx = sm.backward(c);
        x.set_requires_grad(true);
        for (std::size_t i = 0; i < x.data.size(); ++i) x.grad[i] = dx.data[i];
        fd_against(x, loss, 1e-4);
    }
    {
        nn::ChannelSum cs;
        Tensor x = random_tensor({2, 3, 4}, rng);
        auto y = cs.forward(x);
        CHECK(y.dim(1) == 1);
        CHECK(y.data[0] == doctest::Approx(x.data[0] + x.data[4] + x.data[8]));
    }
    {
        nn::ScalarSkip sk;
        sk.a.data[0] = 0.7;
        Tensor x = random_tensor({2, 1, 4}, rng);
        Tensor s = random_tensor({2, 1, 4}, rng);
        Tensor c = random_tensor({2, 1, 4}, rng);
        auto loss = [&]() { return weighted_sum(sk.forward(x, s), c); };
        sk.a.zero_grad();
        sk.forward(x, s);
        sk.backward(c);
        fd_against(sk.a, loss, 1e-6);
    }
    {
        nn::PowerNorm pn;
        Tensor u = random_tensor({3, 2, 16}, rng);
        Tensor p = Tensor::zeros({3, 2});
        for (auto& v : p.data) v = rng.uniform(0.5, 2.0);
        auto v = pn.forward(u, p);
        for (int b = 0; b < 3; ++b)
            for (int k = 0; k < 2; ++k) {
                double mean = 0.0, pw = 0.0;
                for (int t = 0; t < 16; ++t) {
                    const double val = v.data[static_cast<std::size_t>((b * 2 + k) * 16 + t)];
                    mean += val;
                    pw += val * val;
                }
                CHECK(std::fabs(mean / 16.0) < 1e-10);
                CHECK(std::fabs(pw / 16.0 - p.data[static_cast<std::size_t>(b * 2 + k)]) < 1e-10);
            }
        Tensor c = random_tensor({3, 2, 16}, rng);
        auto loss = [&]() { return weighted_sum(pn.forward(u, p), c); };
        pn.forward(u, p);
        Tensor du = pn.backward(c);
        u.set_requires_grad(true);
        for (std::size_t i = 0; i < u.data.size(); ++i) u.grad[i] = du.data[i];
        fd_against(u, loss, 1e-4);
        p.set_requires_grad(true);
        for (std::size_t i = 0; i < p.data.size(); ++i) p.grad[i] = pn.powers_grad().data[i];
        fd_against(p, loss, 1e-4);
    }
}

TEST_CASE("cross entropy and mean squared error") {
    common::Rng rng(8);
    {
        Tensor p = Tensor::zeros({1, 4});
        Tensor bits = Tensor::zeros({1, 4});
        p.data = {1.0, 0.0, 1.0, 0.0};
        bits.data = {1.0, -1.0, 1.0, -1.0};
        CHECK(nn::ce_loss(p, bits).value < 1e-9);
        for (auto& v : p.data) v = 0.5;
        CHECK(nn::ce_loss(p, bits).value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    }
    {
        Tensor p = Tensor::zeros({2, 5});
        Tensor bits = Tensor::zeros({2, 5});
        for (auto& v : p.data) v = rng.uniform(0.05, 0.95);
        for (auto& v : bits.data) v = rng.next_u64() & 1 ? 1.0 : -1.0;
        auto r = nn::ce_loss(p, bits);
        double direct = 0.0;
        for (std::size_t i = 0; i < p.data.size(); ++i)
            direct -= bits.data[i] > 0 ? std::log(p.data[i]) : std::log(1.0 - p.data[i]);
        direct /= static_cast<double>(p.data.size());
        CHECK(std::fabs(r.value - direct) < 1e-12);
        p.set_requires_grad(true);
        p.grad = r.grad.data;
        auto loss = [&]() { return nn::ce_loss(p, bits).value; };
        fd_against(p, loss, 1e-5);

        auto m = nn::mse_loss(p, bits);
        double md = 0.0;
        for (std::size_t i = 0; i < p.data.size(); ++i) {
            const double d = p.data[i] - bits.data[i];
            md += d * d;
        }
        CHECK(std::fabs(m.value - md / static_cast<double>(p.data.size())) < 1e-12);
    }
    {
        // M-ary head bookkeeping
        Tensor p = Tensor::zeros({1, 3, 2});
        p.data = {0.2, 0.1, 0.5, 0.3, 0.3, 0.6};
        Tensor labels = Tensor::zeros({1, 2});
        labels.data = {2.0, 0.0};
        auto r = nn::ce_loss_mary(p, labels);
        CHECK(r.value == doctest::Approx(-(std::log(0.3) + std::log(0.1)) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("q-loss: endpoints, skip rule, finite differences") {
    {
        // strongly separated classes push the loss to zero
        Tensor p = Tensor::zeros({1, 8});
        Tensor bits = Tensor::zeros({1, 8});
        for (int i = 0; i < 8; ++i) {
            const bool one = i % 2 == 0;
            bits.data[static_cast<std::size_t>(i)] = one ? 1.0 : -1.0;
            p.data[static_cast<std::size_t>(i)] = one ? (0.999 + 1e-4 * i) : (0.001 + 1e-4 * i);
        }
        auto r = nn::q_loss(p, bits, 4.0);
        CHECK(!r.skipped);
        CHECK(r.value < 1e-6);
    }
    {
        // zero-mean LLRs in both classes sit exactly at one half
        Tensor p = Tensor::zeros({1, 8});
        Tensor bits = Tensor::zeros({1, 8});
        const double a = 0.3, b = 0.7;  // llr(a) = -llr(b)
        double vals[8] = {a, b, a, b, a, b, a, b};
        double cls[8] = {1, 1, 1, 1, -1, -1, -1, -1};
        for (int i = 0; i < 8; ++i) {
            p.data[static_cast<std::size_t>(i)] = vals[i];
            bits.data[static_cast<std::size_t>(i)] = cls[i];
        }
        auto r = nn::q_loss(p, bits, 2.0);
        CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(r.mu_pos == doctest::Approx(0.0).epsilon(1e-12));
    }
    {
        // one-class batch is skipped
        Tensor p = Tensor::zeros({1, 4});
        Tensor bits = Tensor::zeros({1, 4});
        for (auto& v : bits.data) v = 1.0;
        for (auto& v : p.data) v = 0.6;
        CHECK(nn::q_loss(p, bits, 1.0).skipped);
    }
    {
        common::Rng rng(9);
        Tensor p = Tensor::zeros({2, 8});
        Tensor bits = Tensor::zeros({2, 8});
        for (auto& v : p.data) v = rng.uniform(0.2, 0.8);
        for (std::size_t i = 0; i < bits.data.size(); ++i) bits.data[i] = i % 2 ? 1.0 : -1.0;
        auto r = nn::q_loss(p, bits, 2.0, /*clip_grad=*/false);
        p.set_requires_grad(true);
        p.grad = r.grad.data;
        auto loss = [&]() { return nn::q_loss(p, bits, 2.0, false).value; };
        fd_against(p, loss, 1e-4);
    }
    CHECK(nn::combined_loss(0.4, 0.0, 1.0) == doctest::Approx(0.4));
    CHECK(nn::combined_loss(0.4, 0.3, 0.0) == doctest::Approx(0.4));
    CHECK(nn::combined_loss(0.4, 0.3, 0.5) == doctest::Approx(0.55));
}

TEST_CASE("adam: no-op on zero gradient, first-step size, bowl convergence") {
    {
        std::vector<double> p = {1.0, -2.0};
        std::vector<double> g = {0.0, 0.0};
        nn::AdamState st;
        nn::adam_step(p, g, st, {});
        CHECK(p[0] == 1.0);
        CHECK(p[1] == -2.0);
    }
    {
        std::vector<double> p = {0.0};
        std::vector<double> g = {0.37};
        nn::AdamState st;
        nn::AdamConfig cfg;
        nn::adam_step(p, g, st, cfg);
        CHECK(p[0] == doctest::Approx(-cfg.lr * 0.37 / (0.37 + cfg.eps)).epsilon(1e-9));
    }
    {
        std::vector<double> x = {1.0};
        nn::AdamState st;
        nn::AdamConfig cfg;
        cfg.lr = 0.15;
        for (int i = 0; i < 100; ++i) {
            std::vector<double> g = {x[0]};
            nn::adam_step(x, g, st, cfg);
        }
        CHECK(std::fabs(x[0]) < 1e-3);
    }
}

TEST_CASE("checkpoint container round trip") {
    std::vector<nn::NamedArray> arrays;
    arrays.push_back({"a.w", {2, 3}, {1, 2, 3, 4, 5, 6}});
    arrays.push_back({"b.bias", {4}, {0.5, -0.25, 1e-17, 3.14159}});
    const std::string path = "ckpt_test.bin";
    nn::save_checkpoint(path, arrays);
    auto back = nn::load_checkpoint(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].name == "a.w");
    CHECK(back[0].shape == std::vector<std::int64_t>{2, 3});
    CHECK(back[1].data == arrays[1].data);
    std::remove(path.c_str());
    CHECK_THROWS(nn::load_checkpoint("does_not_exist.bin"));
}

TEST_CASE("forward determinism with identical seeds") {
    common::Rng r1(42), r2(42);
    nn::Conv1dBank a(2, 3, 11, r1), b(2, 3, 11, r2);
    CHECK(a.weight.data == b.weight.data);
    Tensor x = Tensor::zeros({1, 2, 16});
    common::Rng rx(1);
    for (auto& v : x.data) v = rx.gaussian();
    auto ya = a.forward(x);
    auto yb = b.forward(x);
    CHECK(ya.data == yb.data);
}

TEST_CASE("debug checks catch non-finite activations") {
    common::Rng rng(10);
    nn::Conv1dBank conv(1, 1, 3, rng);
    Tensor x = Tensor::zeros({1, 1, 4});
    x.data[2] = std::numeric_limits<double>::infinity();
    nn::set_debug_checks(true);
    CHECK_THROWS(conv.forward(x));
    nn::set_debug_checks(false);
    CHECK_NOTHROW(conv.forward(x));
}
