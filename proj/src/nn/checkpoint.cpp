#include "tnoma/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace tnoma::nn {

namespace {
constexpr char kMagic[8] = {'T', 'N', 'O', 'M', 'A', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& f, T v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& f) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!f) throw std::runtime_error("checkpoint: truncated file");
    return v;
}
} // namespace

void save_checkpoint(const std::string& path, const std::vector<NamedArray>& arrays) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
    f.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(f, kVersion);
    put<std::uint32_t>(f, static_cast<std::uint32_t>(arrays.size()));
    for (const auto& a : arrays) {
        put<std::uint32_t>(f, static_cast<std::uint32_t>(a.name.size()));
        f.write(a.name.data(), static_cast<std::streamsize>(a.name.size()));
        put<std::uint32_t>(f, static_cast<std::uint32_t>(a.shape.size()));
        std::int64_t n = 1;
        for (auto d : a.shape) {
            put<std::int64_t>(f, d);
            n *= d;
        }
        if (static_cast<std::size_t>(n) != a.data.size())
            throw std::invalid_argument("checkpoint: shape/data mismatch in " + a.name);
        f.write(reinterpret_cast<const char*>(a.data.data()),
                static_cast<std::streamsize>(a.data.size() * sizeof(double)));
    }
    if (!f) throw std::runtime_error("checkpoint: write failed for " + path);
}

std::vector<NamedArray> load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("checkpoint: cannot open " + path);
    char magic[8];
    f.read(magic, sizeof(magic));
    if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("checkpoint: bad magic in " + path);
    const auto version = get<std::uint32_t>(f);
    if (version != kVersion) throw std::runtime_error("checkpoint: unsupported version");
    const auto count = get<std::uint32_t>(f);
    std::vector<NamedArray> arrays(count);
    for (auto& a : arrays) {
        const auto name_len = get<std::uint32_t>(f);
        a.name.resize(name_len);
        f.read(a.name.data(), name_len);
        const auto rank = get<std::uint32_t>(f);
        a.shape.resize(rank);
        std::int64_t n = 1;
        for (auto& d : a.shape) {
            d = get<std::int64_t>(f);
            if (d < 0) throw std::runtime_error("checkpoint: negative dimension");
            n *= d;
        }
        a.data.resize(static_cast<std::size_t>(n));
        f.read(reinterpret_cast<char*>(a.data.data()), static_cast<std::streamsize>(a.data.size() * sizeof(double)));
        if (!f) throw std::runtime_error("checkpoint: truncated array " + a.name);
    }
    return arrays;
}

} // namespace tnoma::nn
