#ifndef TNOMA_HARNESS_RUN_HPP
#define TNOMA_HARNESS_RUN_HPP

#include <string>
#include <vector>

#include "tnoma/harness/config.hpp"

namespace tnoma::harness {

struct RunOutput {
    std::string csv_path;
    std::string manifest_path;
    std::vector<std::string> extra_files;
};

// Executes one experiment scenario: creates out_dir, writes results.csv and a
// manifest holding the fully resolved configuration. Training scenarios also
// emit the learning curve and the model checkpoint. Outputs are deterministic
// functions of the configuration (identical seeds give byte-identical files).
RunOutput run(const ExperimentConfig& cfg);

} // namespace tnoma::harness

#endif
