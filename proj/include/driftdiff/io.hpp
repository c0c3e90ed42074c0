// Deterministic text output: shortest round-trip doubles, locale-independent,
// '\n' line endings. CSV bodies must be byte-identical across reruns.
#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "driftdiff/grid.hpp"

namespace driftdiff {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_int(long long v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string join_csv(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line.push_back(',');
        line += cells[i];
    }
    line.push_back('\n');
    return line;
}

class CsvFile {
  public:
    explicit CsvFile(const std::filesystem::path& path) : out_(path, std::ios::binary) {
        require(out_.good(), "CsvFile: cannot open " + path.string());
    }

    void row(const std::vector<std::string>& cells) { out_ << join_csv(cells); }

  private:
    std::ofstream out_;
};

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "write_text_file: cannot open " + path.string());
    out << content;
}

}  // namespace driftdiff
