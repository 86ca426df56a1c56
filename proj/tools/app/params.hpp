#pragma once

#include "report.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cyield::app {

enum class FieldKind { Number, Integer, Text, Path, NumberList, Bool };

// A scenario parameter, shared by the CLI flags, config files and `validate`.
struct Field {
    std::string key;  // config key; the flag is --key with '_' spelled '-'
    FieldKind kind = FieldKind::Number;
    std::string help;
    bool required = false;
    json fallback = nullptr;               // default when absent (null: no default)
    std::vector<std::string> columns;      // Path fields: required CSV columns
    std::vector<std::string> choices;      // Text fields: allowed values
};

// Parameters after validation and defaulting. Paths resolve against `base`.
class Params {
public:
    Params(json values, std::filesystem::path base, std::uint64_t seed)
        : values_(std::move(values)), base_(std::move(base)), seed_(seed) {}

    bool has(const std::string& key) const;
    double number(const std::string& key) const;
    std::int64_t integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::string text(const std::string& key) const;
    std::string path(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;
    std::optional<double> maybe_number(const std::string& key) const;

    const json& values() const { return values_; }
    std::uint64_t seed() const { return seed_; }

private:
    const json& at(const std::string& key) const;

    json values_;
    std::filesystem::path base_;
    std::uint64_t seed_;
};

// Diagnostics for `params` against `fields`: unknown keys, missing or mistyped
// values, bad choices, missing files and CSV headers lacking a column. All
// problems are collected; an empty result means the parameters are usable.
std::vector<std::string> check_params(const std::vector<Field>& fields, const json& params,
                                      const std::filesystem::path& base);

// `params` with defaults filled in for absent keys.
json with_defaults(const std::vector<Field>& fields, json params);

// Converts a command-line string to the JSON value for `kind`. Throws DomainError.
json parse_flag_value(FieldKind kind, const std::string& key, const std::string& text);

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p);

// Reads a JSON file; parse errors name the file and line.
json load_json(const std::filesystem::path& path);

} // namespace cyield::app
