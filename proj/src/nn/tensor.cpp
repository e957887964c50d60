#include "tnoma/nn/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace tnoma::nn {

Tensor Tensor::zeros(std::vector<std::int64_t> shape, bool requires_grad) {
    Tensor t;
    t.shape = std::move(shape);
    t.data.assign(static_cast<std::size_t>(t.numel()), 0.0);
    t.set_requires_grad(requires_grad);
    return t;
}

void Tensor::set_requires_grad(bool rg) {
    requires_grad = rg;
    if (rg)
        grad.assign(data.size(), 0.0);
    else
        grad.clear();
}

void Tensor::zero_grad() {
    for (auto& g : grad) g = 0.0;
}

namespace {
bool g_debug_checks = false;
}

void set_debug_checks(bool on) { g_debug_checks = on; }
bool debug_checks() { return g_debug_checks; }

void check_finite(const Tensor& t, const char* where) {
    if (!g_debug_checks) return;
    for (double v : t.data)
        if (!std::isfinite(v)) throw std::runtime_error(std::string("non-finite value in ") + where);
}

} // namespace tnoma::nn
