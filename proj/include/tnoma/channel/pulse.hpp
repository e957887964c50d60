#ifndef TNOMA_CHANNEL_PULSE_HPP
#define TNOMA_CHANNEL_PULSE_HPP

namespace tnoma::channel {

// Transmit pulse description. All times are in symbol intervals (T = 1).
// span_symbols is the total symbol span of the matched-filtered pulse g,
// so the discrete kernel has taps m = -half_span .. +half_span.
struct PulseSpec {
    double rolloff = 1.0;
    int span_symbols = 7;

    int half_span() const { return (span_symbols - 1) / 2; }
    void validate() const;  // throws std::invalid_argument
};

// Raised cosine g(t) = sinc(t) cos(pi*beta*t) / (1 - (2*beta*t)^2), unit peak.
// Removable singularities at t = 0 and |t| = 1/(2*beta) are evaluated by series.
double raised_cosine(double t, double beta);

// Unit-energy root raised cosine p(t); g(t) above equals (p * p)(t) for the
// untruncated pulse. Used by the matched-filter quadrature oracle.
double root_raised_cosine(double t, double beta);

} // namespace tnoma::channel

#endif
