#ifndef TNOMA_ANALYSIS_SPECIAL_HPP
#define TNOMA_ANALYSIS_SPECIAL_HPP

#include <functional>

namespace tnoma::analysis {

// First-order exponential integral E1(x) = int_x^inf e^-t / t dt, x > 0.
// Series below 1, continued fraction above; relative accuracy ~1e-14.
double exp_integral_E1(double x);

// e^x * E1(x), evaluated jointly so large x (beyond exp underflow) stays finite.
double exp_scaled_E1(double x);

// Gaussian tail Q(x) = 0.5 erfc(x / sqrt(2)).
double q_func(double x);

// Adaptive Gauss-Kronrod (7-15) quadrature to an absolute tolerance.
// Throws std::runtime_error when the subdivision budget is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol);

} // namespace tnoma::analysis

#endif
