#include "tnoma/common/mat.hpp"

#include <lapacke.h>

#include <stdexcept>

namespace tnoma::common {

void matvec(const Matrix& m, std::span<const double> x, std::span<double> y) {
    if (static_cast<std::int64_t>(x.size()) != m.cols || static_cast<std::int64_t>(y.size()) != m.rows)
        throw std::invalid_argument("matvec: dimension mismatch");
    const double* a = m.a.data();
    for (std::int64_t r = 0; r < m.rows; ++r) {
        const double* row = a + r * m.cols;
        double acc = 0.0;
        for (std::int64_t c = 0; c < m.cols; ++c) acc += row[c] * x[static_cast<std::size_t>(c)];
        y[static_cast<std::size_t>(r)] = acc;
    }
}

void matvec_t(const Matrix& m, std::span<const double> x, std::span<double> y) {
    if (static_cast<std::int64_t>(x.size()) != m.rows || static_cast<std::int64_t>(y.size()) != m.cols)
        throw std::invalid_argument("matvec_t: dimension mismatch");
    for (auto& v : y) v = 0.0;
    const double* a = m.a.data();
    for (std::int64_t r = 0; r < m.rows; ++r) {
        const double xr = x[static_cast<std::size_t>(r)];
        if (xr == 0.0) continue;
        const double* row = a + r * m.cols;
        for (std::int64_t c = 0; c < m.cols; ++c) y[static_cast<std::size_t>(c)] += xr * row[c];
    }
}

SvdResult svd_full(const Matrix& a) {
    const lapack_int m = static_cast<lapack_int>(a.rows);
    const lapack_int n = static_cast<lapack_int>(a.cols);
    SvdResult out;
    out.u = Matrix(m, m);
    out.vt = Matrix(n, n);
    out.sigma.assign(static_cast<std::size_t>(std::min(m, n)), 0.0);

    std::vector<double> work(a.a);  // dgesvd destroys its input
    std::vector<double> superb(static_cast<std::size_t>(std::min(m, n)));
    lapack_int info = LAPACKE_dgesvd(LAPACK_ROW_MAJOR, 'A', 'A', m, n, work.data(), n,
                                     out.sigma.data(), out.u.a.data(), m, out.vt.a.data(), n,
                                     superb.data());
    if (info != 0) throw std::runtime_error("svd_full: dgesvd failed to converge");
    return out;
}

} // namespace tnoma::common
