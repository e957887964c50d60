#ifndef TNOMA_NN_CHECKPOINT_HPP
#define TNOMA_NN_CHECKPOINT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace tnoma::nn {

// Versioned binary container of named f64 arrays (little-endian):
//   magic "TNOMACKP", u32 version (1), u32 array count, then per array:
//   u32 name length, name bytes, u32 rank, i64 dims..., f64 data...
// Holds layer parameters, batch-norm running stats and optimizer state.
struct NamedArray {
    std::string name;
    std::vector<std::int64_t> shape;
    std::vector<double> data;
};

void save_checkpoint(const std::string& path, const std::vector<NamedArray>& arrays);
std::vector<NamedArray> load_checkpoint(const std::string& path);

} // namespace tnoma::nn

#endif
