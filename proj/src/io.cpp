#include "wavelab/io.hpp"

#include "wavelab/digest.hpp"
#include "wavelab/errors.hpp"

#include <cstdio>
#include <fstream>

namespace wavelab {

std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string hex_digest(const std::string& s) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(s)));
    return buf;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const auto dir = path.parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp + " for writing");
        out << content;
        if (!out.flush()) throw Error("failed writing " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) body_ += ',';
        body_ += header[i];
    }
    body_ += '\n';
}

void CsvWriter::add_row(std::vector<std::string> cells) {
    if (cells.size() != width_) throw Error("csv row width mismatch");
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) body_ += ',';
        body_ += cells[i];
    }
    body_ += '\n';
}

std::string CsvWriter::str() const { return body_; }

void CsvWriter::write(const std::filesystem::path& path) const {
    write_text_atomic(path, body_);
}

}
