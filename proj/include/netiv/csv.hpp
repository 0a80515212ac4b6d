#pragma once

#include <charconv>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "netiv/errors.hpp"

namespace netiv {

// Shortest round-trip decimal representation.
inline std::string format_double(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// Fixed three decimals (coverage-style columns).
inline std::string format_fixed3(double x) {
    char buf[48];
    int len = std::snprintf(buf, sizeof(buf), "%.3f", x);
    return std::string(buf, static_cast<std::size_t>(len));
}

inline std::string format_opt(const std::optional<double>& x) {
    return x ? format_double(*x) : std::string("NA");
}

inline std::string format_opt_fixed3(const std::optional<double>& x) {
    return x ? format_fixed3(*x) : std::string("NA");
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path), path_(path) {
        if (!out_) throw Error("cannot open '" + path + "' for writing");
        write_row(header);
    }

    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    const std::string& path() const { return path_; }

private:
    std::ofstream out_;
    std::string path_;
};

} // namespace netiv
