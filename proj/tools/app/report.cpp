#include "report.hpp"

#include "cryptoyield/error.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>

namespace cyield::app {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // folds -0
    return fmt::format("{}", v);
}

void Fnv1a::update(std::string_view bytes) {
    for (unsigned char c : bytes) {
        h_ ^= c;
        h_ *= 0x100000001b3ull;
    }
}

std::string Fnv1a::hex() const { return fmt::format("{:016x}", h_); }

std::string to_csv(const Series& s) {
    std::string out;
    const auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(s.header);
    for (const auto& r : s.rows) line(r);
    return out;
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError(fmt::format("cannot open {} for writing", p.string()));
    f << content;
    f.close();
    if (!f) throw DataError(fmt::format("failed writing {}", p.string()));
}

} // namespace

std::vector<std::filesystem::path> write_report(const Report& report, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DataError(fmt::format("cannot create output directory {}: {}", dir.string(), ec.message()));

    std::vector<std::filesystem::path> written;
    try {
        for (const auto& s : report.series) {
            const auto p = dir / (s.name + ".csv");
            write_file(p, to_csv(s));
            written.push_back(p);
        }
        const auto p = dir / "summary.json";
        write_file(p, report.summary.dump(2) + "\n");
        written.push_back(p);
    } catch (...) {
        for (const auto& p : written) std::filesystem::remove(p, ec);
        throw;
    }
    return written;
}

} // namespace cyield::app
