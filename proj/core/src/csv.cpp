#include "cryptoyield/core/csv.hpp"

#include "cryptoyield/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <fmt/format.h>

namespace cyield::core {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        out.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace

double parse_double(std::string_view text) {
    text = trim(text);
    if (text.empty()) throw DataError("empty numeric field");
    std::string buf(text);
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || !std::isfinite(v))
        throw DataError(fmt::format("not a finite number: '{}'", text));
    return v;
}

CsvTable CsvTable::read(std::istream& in, std::string source) {
    CsvTable t;
    t.source_ = std::move(source);
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        auto cells = split(body);
        if (!have_header) {
            t.header_ = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != t.header_.size())
            throw DataError(fmt::format("{}:{}: expected {} fields, found {}", t.source_, lineno, t.header_.size(),
                                        cells.size()));
        t.rows_.push_back(Row{lineno, std::move(cells)});
    }
    if (!have_header) throw DataError(fmt::format("{}: missing header row", t.source_));
    return t;
}

CsvTable CsvTable::read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(fmt::format("{}: cannot open file", path));
    return read(in, path);
}

bool CsvTable::has_column(std::string_view name) const {
    return std::find(header_.begin(), header_.end(), name) != header_.end();
}

std::size_t CsvTable::column(std::string_view name) const {
    const auto it = std::find(header_.begin(), header_.end(), name);
    if (it == header_.end())
        throw DataError(fmt::format("{}:1: missing required column '{}'", source_, name));
    return static_cast<std::size_t>(it - header_.begin());
}

void CsvTable::require(const std::vector<std::string>& names) const {
    for (const auto& n : names) column(n);
}

double CsvTable::number(const Row& row, std::size_t col) const {
    try {
        return parse_double(row.cells.at(col));
    } catch (const DataError& e) {
        throw DataError(fmt::format("{}: column '{}': {}", where(row), header_.at(col), e.what()));
    }
}

const std::string& CsvTable::text(const Row& row, std::size_t col) const { return row.cells.at(col); }

std::string CsvTable::where(const Row& row) const { return fmt::format("{}:{}", source_, row.line); }

} // namespace cyield::core
