#pragma once

#include <string>
#include <vector>

namespace sphmono {

/// Shortest exact decimal form of a double (17 significant digits,
/// locale-independent); parses back bit-identically.
std::string format_double(double v);

/// Strict counterpart of format_double.
double parse_double(const std::string& s);

/// Minimal CSV writer: one header row, then numeric rows via format_double.
class CsvWriter {
public:
    explicit CsvWriter(std::string path);
    void header(const std::vector<std::string>& names);
    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& fields);
    void close();

private:
    std::string path_;
    std::string buffer_;
    bool closed_ = false;
};

/// Bundled reader for the CSVs this toolkit writes (comma-separated, one
/// header row). Returns all rows including the header.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

}  // namespace sphmono
