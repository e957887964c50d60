#include "tnoma/analysis/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tnoma::analysis {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Continued fraction for e^x E1(x) (Lentz), valid for x > 1:
//   e^x E1(x) = 1 / (x + 1 - 1/(x + 3 - 4/(x + 5 - 9/(x + 7 - ...))))
double scaled_e1_cf(double x) {
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k <= 10000; ++k) {
        double ak = -static_cast<double>(k) * static_cast<double>(k);
        b += 2.0;
        d = 1.0 / (ak * d + b);
        c = b + ak / c;
        double del = c * d;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) return h;
    }
    throw std::runtime_error("exp_scaled_E1: continued fraction did not converge");
}

double e1_series(double x) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k <= 200; ++k) {
        term *= -x / static_cast<double>(k);
        double del = -term / static_cast<double>(k);
        sum += del;
        if (std::fabs(del) < 1e-18 * (std::fabs(sum) + 1e-300)) break;
    }
    return -kEulerGamma - std::log(x) + sum;
}

} // namespace

double exp_integral_E1(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("exp_integral_E1: requires x > 0");
    if (x <= 1.0) return e1_series(x);
    return std::exp(-x) * scaled_e1_cf(x);
}

double exp_scaled_E1(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("exp_scaled_E1: requires x > 0");
    if (x <= 1.0) return std::exp(x) * e1_series(x);
    return scaled_e1_cf(x);
}

double q_func(double x) { return 0.5 * std::erfc(x * 0.70710678118654752440084436210485); }

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkEstimate {
    double value;
    double error;
};

GkEstimate gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * xgk[i]);
        fv[14 - i] = f(c + h * xgk[i]);
    }
    fv[7] = f(c);
    double k = 0.0;
    for (int i = 0; i < 7; ++i) k += wgk[i] * (fv[i] + fv[14 - i]);
    k += wgk[7] * fv[7];
    double g = wg[3] * fv[7];
    for (int i = 0; i < 3; ++i) g += wg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    return {k * h, std::fabs((k - g) * h)};
}

double integrate_rec(const std::function<double(double)>& f, double a, double b, double tol, int depth) {
    GkEstimate e = gk15(f, a, b);
    if (e.error <= tol || e.error <= 1e-16 * std::fabs(e.value)) return e.value;
    if (depth > 60) throw std::runtime_error("integrate: adaptive subdivision did not converge");
    double m = 0.5 * (a + b);
    return integrate_rec(f, a, m, 0.5 * tol, depth + 1) + integrate_rec(f, m, b, 0.5 * tol, depth + 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
    if (a == b) return 0.0;
    return integrate_rec(f, a, b, abs_tol, 0);
}

} // namespace tnoma::analysis
