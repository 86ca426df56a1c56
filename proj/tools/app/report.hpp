#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cyield::app {

using json = nlohmann::ordered_json;

// One CSV table of a report.
struct Series {
    std::string name;  // file stem
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

struct Report {
    json summary = json::object();
    std::vector<Series> series;
};

// Shortest representation that round-trips; NaN and infinities spelled out.
std::string num(double v);

// 64-bit FNV-1a, incremental.
class Fnv1a {
public:
    void update(std::string_view bytes);
    std::uint64_t value() const { return h_; }
    std::string hex() const;

private:
    std::uint64_t h_ = 0xcbf29ce484222325ull;
};

// Writes summary.json and one CSV per series into `dir`. On any write failure
// the files already written are removed before the error propagates.
std::vector<std::filesystem::path> write_report(const Report& report, const std::filesystem::path& dir);

std::string to_csv(const Series& s);

} // namespace cyield::app
