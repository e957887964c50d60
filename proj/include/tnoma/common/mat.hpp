#ifndef TNOMA_COMMON_MAT_HPP
#define TNOMA_COMMON_MAT_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace tnoma::common {

// Dense row-major matrix; just enough linear algebra for the transceivers.
struct Matrix {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::int64_t r, std::int64_t c) : rows(r), cols(c), a(static_cast<std::size_t>(r * c), 0.0) {}

    double& operator()(std::int64_t r, std::int64_t c) { return a[static_cast<std::size_t>(r * cols + c)]; }
    double operator()(std::int64_t r, std::int64_t c) const { return a[static_cast<std::size_t>(r * cols + c)]; }
};

// y = A x
void matvec(const Matrix& m, std::span<const double> x, std::span<double> y);
// y = A^T x
void matvec_t(const Matrix& m, std::span<const double> x, std::span<double> y);

struct SvdResult {
    Matrix u;                   // m x m, full orthogonal basis
    std::vector<double> sigma;  // min(m, n), nonincreasing
    Matrix vt;                  // n x n, full orthogonal basis (transposed factor)
};

// Full SVD A = U diag(sigma) V^T via LAPACK.
SvdResult svd_full(const Matrix& a);

} // namespace tnoma::common

#endif
