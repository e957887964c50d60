#ifndef TNOMA_HARNESS_COMPARE_HPP
#define TNOMA_HARNESS_COMPARE_HPP

#include <string>
#include <vector>

#include "tnoma/harness/csv.hpp"

namespace tnoma::harness {

struct CompareOptions {
    std::string metric = "ber";
    std::string user = "avg";
    double at_value = 2e-3;   // level for the headline horizontal-gap readout
    std::string plot_path;    // optional SVG output
};

struct CompareResult {
    std::vector<double> snr_grid;  // grid of curve A
    std::vector<double> value_a;
    std::vector<double> value_b;
    std::vector<double> gain_db;   // SNR advantage of A over B at A's level (NaN when outside B)
    double gain_at_target = 0.0;   // at options.at_value (NaN when not bracketed)
    bool grids_aligned = true;
    std::string summary;           // printable table
};

// Aligned per-SNR deltas between two result files, interpolated on the log of
// the metric. A positive gain means curve A reaches the same level at that
// many fewer dB.
CompareResult compare_files(const std::string& path_a, const std::string& path_b,
                            const CompareOptions& opts);
CompareResult compare_rows(const std::vector<ResultRow>& a, const std::vector<ResultRow>& b,
                           const CompareOptions& opts);

} // namespace tnoma::harness

#endif
