#ifndef BHL_CSV_HPP
#define BHL_CSV_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "bhl/errors.hpp"

namespace bhl {

// %.17g round-trips doubles exactly, so equal runs produce equal bytes.
inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_value(int v) { return std::to_string(v); }
inline std::string format_value(std::size_t v) { return std::to_string(v); }
inline std::string format_value(bool v) { return v ? "1" : "0"; }
inline std::string format_value(const char* v) { return v; }
inline std::string format_value(const std::string& v) { return v; }

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) {
        out_.open(path, std::ios::binary | std::ios::trunc);
        if (!out_) throw error("cannot open " + path.string() + " for writing");
        write_row(header);
    }

    void write_row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

    template <typename... Ts>
    void row(const Ts&... values) {
        write_row({format_value(values)...});
    }

private:
    std::ofstream out_;
};

// FNV-1a over bytes, hex encoded; used to fingerprint configs in manifests.
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace bhl

#endif
