#include "params.hpp"

#include "cryptoyield/core/csv.hpp"
#include "cryptoyield/error.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

namespace cyield::app {

namespace {

const char* kind_name(FieldKind k) {
    switch (k) {
    case FieldKind::Number: return "a number";
    case FieldKind::Integer: return "an integer";
    case FieldKind::Text: return "a string";
    case FieldKind::Path: return "a file path";
    case FieldKind::NumberList: return "a list of numbers";
    case FieldKind::Bool: return "true or false";
    }
    return "?";
}

bool matches(FieldKind k, const json& v) {
    switch (k) {
    case FieldKind::Number: return v.is_number();
    case FieldKind::Integer: return v.is_number_integer();
    case FieldKind::Text:
    case FieldKind::Path: return v.is_string();
    case FieldKind::NumberList:
        return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); });
    case FieldKind::Bool: return v.is_boolean();
    }
    return false;
}

} // namespace

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(fmt::format("{}: cannot open file", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = text.substr(0, std::min<std::size_t>(e.byte, text.size()));
        const auto line = 1 + std::count(upto.begin(), upto.end(), '\n');
        throw DataError(fmt::format("{}:{}: invalid JSON ({})", path.string(), line, e.what()));
    }
}

std::vector<std::string> check_params(const std::vector<Field>& fields, const json& params,
                                      const std::filesystem::path& base) {
    std::vector<std::string> out;
    if (!params.is_object()) {
        out.push_back("parameters must be a JSON object");
        return out;
    }
    for (const auto& [key, value] : params.items()) {
        if (std::none_of(fields.begin(), fields.end(), [&](const Field& f) { return f.key == key; }))
            out.push_back(fmt::format("unknown parameter '{}'", key));
    }
    for (const auto& f : fields) {
        if (!params.contains(f.key)) {
            if (f.required) out.push_back(fmt::format("missing required parameter '{}'", f.key));
            continue;
        }
        const json& v = params.at(f.key);
        if (!matches(f.kind, v)) {
            out.push_back(fmt::format("parameter '{}' must be {}", f.key, kind_name(f.kind)));
            continue;
        }
        if (!f.choices.empty() &&
            std::find(f.choices.begin(), f.choices.end(), v.get<std::string>()) == f.choices.end())
            out.push_back(fmt::format("parameter '{}' must be one of: {}", f.key, fmt::join(f.choices, ", ")));
        if (f.kind != FieldKind::Path) continue;

        const auto path = resolve(base, v.get<std::string>());
        if (!std::filesystem::is_regular_file(path)) {
            out.push_back(fmt::format("parameter '{}': file not found: {}", f.key, path.string()));
            continue;
        }
        if (f.columns.empty()) continue;
        try {
            const auto table = core::CsvTable::read_file(path.string());
            for (const auto& c : f.columns)
                if (!table.has_column(c))
                    out.push_back(fmt::format("{}:1: missing required column '{}'", path.string(), c));
        } catch (const Error& e) {
            out.push_back(e.what());
        }
    }
    return out;
}

json with_defaults(const std::vector<Field>& fields, json params) {
    for (const auto& f : fields)
        if (!params.contains(f.key) && !f.fallback.is_null()) params[f.key] = f.fallback;
    return params;
}

json parse_flag_value(FieldKind kind, const std::string& key, const std::string& text) {
    try {
        switch (kind) {
        case FieldKind::Number: return core::parse_double(text);
        case FieldKind::Integer: {
            std::size_t used = 0;
            const long long v = std::stoll(text, &used);
            if (used != text.size()) break;
            return v;
        }
        case FieldKind::Text:
        case FieldKind::Path: return text;
        case FieldKind::NumberList: {
            json arr = json::array();
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) arr.push_back(core::parse_double(item));
            return arr;
        }
        case FieldKind::Bool:
            if (text == "true" || text == "1") return true;
            if (text == "false" || text == "0") return false;
            break;
        }
    } catch (const std::exception&) {
    }
    throw DomainError(fmt::format("--{}: '{}' is not {}", key, text, kind_name(kind)));
}

const json& Params::at(const std::string& key) const {
    if (!values_.contains(key)) throw DomainError(fmt::format("missing parameter '{}'", key));
    return values_.at(key);
}

bool Params::has(const std::string& key) const { return values_.contains(key) && !values_.at(key).is_null(); }
double Params::number(const std::string& key) const { return at(key).get<double>(); }
std::int64_t Params::integer(const std::string& key) const { return at(key).get<std::int64_t>(); }
bool Params::flag(const std::string& key) const { return at(key).get<bool>(); }
std::string Params::text(const std::string& key) const { return at(key).get<std::string>(); }
std::string Params::path(const std::string& key) const { return resolve(base_, text(key)).string(); }
std::vector<double> Params::numbers(const std::string& key) const { return at(key).get<std::vector<double>>(); }

std::optional<double> Params::maybe_number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return number(key);
}

} // namespace cyield::app
