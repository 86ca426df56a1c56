#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace cyield::core {

// Minimal comma-separated reader: header row, no quoting, `#` comment lines and
// blank lines skipped. Errors carry the source name and 1-based line number.
class CsvTable {
public:
    struct Row {
        std::size_t line = 0;
        std::vector<std::string> cells;
    };

    static CsvTable read(std::istream& in, std::string source = "<stream>");
    static CsvTable read_file(const std::string& path);

    const std::string& source() const { return source_; }
    const std::vector<std::string>& header() const { return header_; }
    const std::vector<Row>& rows() const { return rows_; }

    // Column index; throws DataError naming the missing column.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const;

    // Throws DataError unless the header contains every name in `names`.
    void require(const std::vector<std::string>& names) const;

    double number(const Row& row, std::size_t col) const;
    const std::string& text(const Row& row, std::size_t col) const;

    // "file:line: message"
    std::string where(const Row& row) const;

private:
    std::string source_;
    std::vector<std::string> header_;
    std::vector<Row> rows_;
};

double parse_double(std::string_view text);

} // namespace cyield::core
