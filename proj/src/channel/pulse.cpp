#include "tnoma/channel/pulse.hpp"

#include <cmath>
#include <stdexcept>

namespace tnoma::channel {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

double sinc(double t) {
    double x = kPi * t;
    if (std::fabs(x) < 1e-4) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

} // namespace

void PulseSpec::validate() const {
    if (!(rolloff >= 0.0 && rolloff <= 1.0)) throw std::invalid_argument("PulseSpec: rolloff must lie in [0, 1]");
    if (span_symbols < 1) throw std::invalid_argument("PulseSpec: span_symbols must be >= 1");
    if (span_symbols % 2 == 0) throw std::invalid_argument("PulseSpec: span_symbols must be odd");
}

double raised_cosine(double t, double beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("raised_cosine: rolloff must lie in [0, 1]");
    if (beta == 0.0) return sinc(t);
    const double u = 2.0 * beta * t;
    const double den = 1.0 - u * u;
    if (std::fabs(den) < 1e-4) {
        // cos(pi*beta*t) / (1 - (2*beta*t)^2) expanded around t0 = 1/(2*beta)
        const double t0 = (t >= 0.0 ? 1.0 : -1.0) / (2.0 * beta);
        const double d = t - t0;
        const double pb = kPi * beta;
        const double ratio = pb * (1.0 - pb * pb * d * d / 6.0) / (4.0 * beta * beta * (2.0 * std::fabs(t0) + (t >= 0.0 ? d : -d)));
        return sinc(t) * ratio;
    }
    return sinc(t) * std::cos(kPi * beta * t) / den;
}

double root_raised_cosine(double t, double beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("root_raised_cosine: rolloff must lie in [0, 1]");
    if (beta == 0.0) return sinc(t);
    if (std::fabs(t) < 1e-8) return 1.0 - beta + 4.0 * beta / kPi;
    const double q = 4.0 * beta * t;
    const double den = kPi * t * (1.0 - q * q);
    if (std::fabs(1.0 - q * q) < 1e-7) {
        const double s = kPi / (4.0 * beta);
        return (beta / std::sqrt(2.0)) * ((1.0 + 2.0 / kPi) * std::sin(s) + (1.0 - 2.0 / kPi) * std::cos(s));
    }
    return (std::sin(kPi * t * (1.0 - beta)) + q * std::cos(kPi * t * (1.0 + beta))) / den;
}

} // namespace tnoma::channel
