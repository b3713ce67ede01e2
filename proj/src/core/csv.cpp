#include "csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "error.hpp"

namespace cavkit {

namespace {

bool needs_quotes(std::string_view cell) {
    return cell.find_first_of(",\"\r\n") != std::string_view::npos;
}

void append_cell(std::string& out, std::string_view cell) {
    if (!needs_quotes(cell)) {
        out.append(cell);
        return;
    }
    out.push_back('"');
    for (char c : cell) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
}

void append_record(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out.push_back(',');
        append_cell(out, cells[i]);
    }
    out.append("\r\n");
}

}  // namespace

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw NumericError("csv row width " + std::to_string(cells.size()) +
                           " does not match header width " + std::to_string(header_.size()));
    rows_.push_back(std::move(cells));
}

std::string CsvWriter::to_string() const {
    std::string out;
    append_record(out, header_);
    for (const auto& row : rows_) append_record(out, row);
    return out;
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path);
    const std::string body = to_string();
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f) throw DataError("write failed: " + path);
}

std::string csv_num(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

std::string csv_int(long long v) { return std::to_string(v); }

std::vector<std::vector<std::string>> csv_parse(std::string_view content) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool in_quotes = false;
    bool cell_started = false;
    auto end_cell = [&] {
        row.push_back(std::move(cell));
        cell.clear();
        cell_started = false;
    };
    auto end_row = [&] {
        end_cell();
        rows.push_back(std::move(row));
        row.clear();
    };
    for (std::size_t i = 0; i < content.size(); ++i) {
        char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cell.push_back(c);
            }
        } else if (c == '"' && !cell_started && cell.empty()) {
            in_quotes = true;
            cell_started = true;
        } else if (c == ',') {
            end_cell();
        } else if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') {
            end_row();
            ++i;
        } else if (c == '\n') {
            end_row();
        } else {
            cell.push_back(c);
            cell_started = true;
        }
    }
    if (cell_started || !cell.empty() || !row.empty()) end_row();
    return rows;
}

}  // namespace cavkit
