#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace wavelab {

// Shortest-exact formatting for doubles; byte-stable across runs.
std::string fmt_double(double x);

// Writes content to path via a temp file + rename, so a killed run never
// leaves a partial file. Parent directories are created as needed.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/** Row-oriented CSV builder with a fixed header. */
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::string str() const;
    void write(const std::filesystem::path& path) const;

private:
    size_t width_;
    std::string body_;
};

}
