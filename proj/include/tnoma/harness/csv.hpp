#ifndef TNOMA_HARNESS_CSV_HPP
#define TNOMA_HARNESS_CSV_HPP

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace tnoma::harness {

inline constexpr const char* kCsvHeader = "scenario,snr_db,user,metric,value,ci95,frames,seed,config_hash";

struct ResultRow {
    std::string scenario;
    double snr_db = 0.0;
    std::string user;    // "1", "2", "avg", "strong", "weak", "single", or a method label
    std::string metric;  // ber, rate_bits_s_hz, loss_ce, loss_q, flops, storage, ...
    double value = 0.0;
    double ci95 = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t seed = 0;
    std::string config_hash;
};

// Append-only writer with fixed numeric formatting, so identical inputs give
// byte-identical files.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void write(const ResultRow& row);
    void close();

private:
    std::FILE* f_ = nullptr;
};

std::vector<ResultRow> read_csv(const std::string& path);

} // namespace tnoma::harness

#endif
