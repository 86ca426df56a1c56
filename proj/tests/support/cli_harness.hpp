#pragma once

// In-process CLI runs with captured streams and scratch directories.

#include "app/cli.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace clitest {

namespace fs = std::filesystem;

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

inline Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = cyield::app::run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

// Fresh directory under the system temp dir, removed on destruction.
class Scratch {
public:
    Scratch() {
        static std::atomic<int> counter{0};
        dir_ = fs::temp_directory_path() /
               ("cryptoyield-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }
    Scratch(const Scratch&) = delete;
    Scratch& operator=(const Scratch&) = delete;

    const fs::path& dir() const { return dir_; }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const {
        const auto p = dir_ / name;
        fs::create_directories(p.parent_path());
        std::ofstream(p, std::ios::binary) << text;
        return p.string();
    }

private:
    fs::path dir_;
};

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline cyield::app::json summary(const fs::path& dir) {
    return cyield::app::json::parse(slurp(dir / "summary.json"));
}

// Rows of a CSV written by the CLI, header first.
inline std::vector<std::vector<std::string>> csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace clitest
