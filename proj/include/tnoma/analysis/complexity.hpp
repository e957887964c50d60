#ifndef TNOMA_ANALYSIS_COMPLEXITY_HPP
#define TNOMA_ANALYSIS_COMPLEXITY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tnoma/ae/variant.hpp"

namespace tnoma::analysis {

struct ComplexitySpec {
    ae::AeVariant variant{};
    int k_users = 2;
    int n_symbols = 512;
    int pa_h1 = 32, pa_h2 = 32, pa_h3 = 32;
    int pa_h3_reference = 16;  // hidden size consistent with the reference example count
    int t_h1 = 8, t_h2 = 8;
    int svd_measure_symbols = 64;  // frame size for the instrumented dense-transform count
};

// One row per method. flops/storage carry the closed-form operation counts at
// this configuration; the reference columns carry the published-style example
// counts whose conventions differ for two rows (see note).
struct ComplexityRow {
    std::string method;
    double flops = 0.0;
    double flops_reference = 0.0;
    double storage = 0.0;
    double storage_reference = 0.0;
    std::string note;
};

std::vector<ComplexityRow> complexity_report(const ComplexitySpec& spec);

// Instrumented multiply-add counters and parameter counts from a single-frame
// forward pass of the assembled transceiver.
struct MeasuredCounts {
    std::uint64_t encoder_macs = 0;
    std::uint64_t decoder_macs = 0;  // all users
    std::uint64_t pa_macs = 0;
    std::uint64_t t_macs = 0;        // one user
    std::uint64_t svd_encode_macs = 0;
    std::uint64_t encoder_params = 0;
    std::uint64_t decoder_params = 0;
};
MeasuredCounts measure_counts(const ComplexitySpec& spec);

} // namespace tnoma::analysis

#endif
