#ifndef TNOMA_NN_TENSOR_HPP
#define TNOMA_NN_TENSOR_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace tnoma::nn {

// Dense row-major f64 tensor with an attached gradient accumulator.
struct Tensor {
    std::vector<std::int64_t> shape;
    std::vector<double> data;
    std::vector<double> grad;
    bool requires_grad = false;

    Tensor() = default;

    static Tensor zeros(std::vector<std::int64_t> shape, bool requires_grad = false);

    std::int64_t numel() const {
        std::int64_t n = 1;
        for (auto d : shape) n *= d;
        return n;
    }
    std::int64_t dim(int i) const { return shape[static_cast<std::size_t>(i)]; }
    int rank() const { return static_cast<int>(shape.size()); }

    void set_requires_grad(bool rg);
    void zero_grad();
};

// Runtime-switchable NaN/Inf scanning of layer outputs.
void set_debug_checks(bool on);
bool debug_checks();
void check_finite(const Tensor& t, const char* where);

} // namespace tnoma::nn

#endif
