#include "tnoma/harness/csv.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tnoma::harness {

CsvWriter::CsvWriter(const std::string& path) {
    f_ = std::fopen(path.c_str(), "w");
    if (!f_) throw std::runtime_error("CsvWriter: cannot open " + path);
    std::fprintf(f_, "%s\n", kCsvHeader);
}

CsvWriter::~CsvWriter() { close(); }

void CsvWriter::close() {
    if (f_) {
        std::fclose(f_);
        f_ = nullptr;
    }
}

void CsvWriter::write(const ResultRow& r) {
    if (!f_) throw std::runtime_error("CsvWriter: file already closed");
    std::fprintf(f_, "%s,%.6g,%s,%s,%.10g,%.6g,%llu,%llu,%s\n", r.scenario.c_str(), r.snr_db,
                 r.user.c_str(), r.metric.c_str(), r.value, r.ci95,
                 static_cast<unsigned long long>(r.frames), static_cast<unsigned long long>(r.seed),
                 r.config_hash.c_str());
}

std::vector<ResultRow> read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_csv: cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("read_csv: empty file " + path);
    if (line != kCsvHeader) throw std::runtime_error("read_csv: unexpected header in " + path);
    std::vector<ResultRow> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        ResultRow r;
        auto next = [&]() {
            if (!std::getline(ss, field, ',')) throw std::runtime_error("read_csv: short row in " + path);
            return field;
        };
        r.scenario = next();
        r.snr_db = std::stod(next());
        r.user = next();
        r.metric = next();
        r.value = std::stod(next());
        r.ci95 = std::stod(next());
        r.frames = std::stoull(next());
        r.seed = std::stoull(next());
        r.config_hash = next();
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace tnoma::harness
