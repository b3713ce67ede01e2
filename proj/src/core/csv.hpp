#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cavkit {

// RFC 4180 writer: header row mandatory, CRLF record separators, UTF-8
// payload, quoting only where required. Used by every tabular report so
// reruns stay byte-identical.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::string to_string() const;
    void write_file(const std::string& path) const;

    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Fixed-format float cells; deterministic, locale-independent.
std::string csv_num(double v, int precision = 6);
std::string csv_int(long long v);

// Minimal RFC 4180 reader (quoted fields, CRLF or LF); returns rows including
// the header. Only used by the report renderer and tests.
std::vector<std::vector<std::string>> csv_parse(std::string_view content);

}  // namespace cavkit
