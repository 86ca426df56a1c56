#include "cli.hpp"

#include "cryptoyield/error.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace cyield::app {

namespace {

namespace fs = std::filesystem;

std::string flag_name(const std::string& key) {
    std::string f = key;
    std::replace(f.begin(), f.end(), '_', '-');
    return "--" + f;
}

std::string file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Scenario {
    const Command* command = nullptr;
    json params = json::object();
    std::uint64_t seed = 1;
    bool has_seed = false;
};

// Structural problems of one scenario config; `scenario` is filled when usable.
std::vector<std::string> read_scenario(const json& cfg, Scenario& scenario) {
    std::vector<std::string> out;
    if (!cfg.is_object()) return {"config must be a JSON object"};
    for (const auto& [key, value] : cfg.items())
        if (key != "command" && key != "params" && key != "seed")
            out.push_back(fmt::format("unknown config key '{}'", key));
    if (!cfg.contains("command")) {
        out.push_back("missing 'command'");
    } else if (!cfg.at("command").is_string()) {
        out.push_back("'command' must be a string");
    } else if (!(scenario.command = find_command(cfg.at("command").get<std::string>()))) {
        std::vector<std::string> names;
        for (const auto& c : commands()) names.push_back(c.name);
        out.push_back(fmt::format("unknown command '{}' (expected one of: {})", cfg.at("command").get<std::string>(),
                                  fmt::join(names, ", ")));
    }
    if (cfg.contains("seed")) {
        if (cfg.at("seed").is_number_unsigned()) {
            scenario.seed = cfg.at("seed").get<std::uint64_t>();
            scenario.has_seed = true;
        } else {
            out.push_back("'seed' must be a non-negative integer");
        }
    }
    if (cfg.contains("params")) {
        if (cfg.at("params").is_object())
            scenario.params = cfg.at("params");
        else
            out.push_back("'params' must be a JSON object");
    }
    return out;
}

std::vector<std::string> check_scenario(const json& cfg, const fs::path& base) {
    Scenario s;
    auto out = read_scenario(cfg, s);
    if (s.command) {
        auto more = check_params(s.command->fields, s.params, base);
        out.insert(out.end(), more.begin(), more.end());
    }
    return out;
}

bool is_pack(const json& cfg) { return cfg.is_object() && cfg.contains("scenarios"); }

std::vector<fs::path> pack_entries(const json& cfg, const fs::path& base, std::vector<std::string>& problems) {
    std::vector<fs::path> out;
    const json& list = cfg.at("scenarios");
    if (!list.is_array() || list.empty()) {
        problems.push_back("'scenarios' must be a non-empty list of config paths");
        return out;
    }
    for (const auto& [key, value] : cfg.items())
        if (key != "scenarios") problems.push_back(fmt::format("unknown pack key '{}'", key));
    for (const auto& e : list) {
        if (!e.is_string()) {
            problems.push_back("'scenarios' entries must be strings");
            continue;
        }
        out.push_back(resolve(base, e.get<std::string>()));
    }
    return out;
}

void emit(const Report& r, const fs::path& dir, bool quiet, std::ostream& out) {
    write_report(r, dir);
    if (!quiet) out << r.summary.dump(2) << "\n";
}

std::string type_name(FieldKind k) {
    switch (k) {
    case FieldKind::Number: return "NUM";
    case FieldKind::Integer: return "INT";
    case FieldKind::Text: return "TEXT";
    case FieldKind::Path: return "FILE";
    case FieldKind::NumberList: return "NUM,...";
    case FieldKind::Bool: return "true|false";
    }
    return "";
}

int exit_code(const Error& e) { return e.kind() == Error::Kind::Numeric ? 3 : 2; }

} // namespace

Report execute(const Command& command, const json& params, const fs::path& base, std::uint64_t seed) {
    const auto problems = check_params(command.fields, params, base);
    if (!problems.empty()) throw DataError(fmt::format("{}: {}", command.name, fmt::join(problems, "; ")));
    const json values = with_defaults(command.fields, params);
    Report r = command.run(Params(values, base, seed));

    Fnv1a h;
    h.update(command.name);
    h.update(std::string(1, '\0'));
    h.update(values.dump());
    h.update(std::string(1, '\0'));
    h.update(std::to_string(seed));
    for (const auto& f : command.fields)
        if (f.kind == FieldKind::Path && values.contains(f.key))
            h.update(file_bytes(resolve(base, values.at(f.key).get<std::string>())));

    r.summary["provenance"] = {{"tool", kToolName},
                               {"version", kToolVersion},
                               {"command", command.name},
                               {"seed", seed},
                               {"rng", "philox4x32-10/v1"},
                               {"config_hash", h.hex()},
                               {"params", values}};
    return r;
}

std::vector<std::string> validate_config(const fs::path& config) {
    json cfg;
    try {
        cfg = load_json(config);
    } catch (const Error& e) {
        return {e.what()};
    }
    const fs::path base = config.parent_path();
    if (!is_pack(cfg)) return check_scenario(cfg, base);

    std::vector<std::string> out;
    for (const auto& p : pack_entries(cfg, base, out)) {
        std::vector<std::string> sub;
        try {
            sub = check_scenario(load_json(p), p.parent_path());
        } catch (const Error& e) {
            sub = {e.what()};
        }
        for (auto& s : sub) out.push_back(fmt::format("{}: {}", p.string(), s));
    }
    return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Yield analytics for cryptofinance: AMMs, loans, perpetual funding, staking, implied rates, "
                 "cross-currency swaps."};
    app.name(kToolName);
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    std::string out_dir = "cryptoyield-out";
    std::uint64_t seed = 1;
    bool quiet = false;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "random seed")->capture_default_str();
        sub->add_flag("--quiet", quiet, "do not print the summary");
    };

    std::map<std::string, CLI::App*> groups;
    std::map<std::string, std::map<std::string, std::string>> raw;
    std::vector<std::pair<const Command*, CLI::App*>> leaves;
    for (const auto& c : commands()) {
        CLI::App* parent = &app;
        for (std::size_t i = 0; i + 1 < c.cli_path.size(); ++i) {
            auto& g = groups[c.cli_path[i]];
            if (!g) {
                g = parent->add_subcommand(c.cli_path[i], fmt::format("{} commands", c.cli_path[i]));
                g->require_subcommand(1);
            }
            parent = g;
        }
        CLI::App* sub = parent->add_subcommand(c.cli_path.back(), c.help);
        auto& store = raw[c.name];
        for (const auto& f : c.fields) {
            std::string help = f.help;
            if (!f.fallback.is_null()) help += fmt::format(" (default {})", f.fallback.dump());
            if (f.required) help += " [required]";
            sub->add_option(flag_name(f.key), store[f.key], help)->type_name(type_name(f.kind));
        }
        add_common(sub);
        leaves.emplace_back(&c, sub);
    }

    std::string config;
    CLI::App* run = app.add_subcommand("run", "Run a scenario config or a scenario pack");
    run->add_option("--config", config, "config JSON")->required()->check(CLI::ExistingFile);
    add_common(run);
    CLI::App* validate = app.add_subcommand("validate", "Check a config without running it");
    validate->add_option("--config", config, "config JSON")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) {
            const auto problems = validate_config(config);
            if (problems.empty()) {
                out << "ok\n";
                return 0;
            }
            for (const auto& p : problems) err << p << "\n";
            return 2;
        }

        if (run->parsed()) {
            const bool explicit_seed = run->get_option("--seed")->count() > 0;
            const fs::path cfg_path(config);
            const json cfg = load_json(cfg_path);
            const auto run_one = [&](const json& c, const fs::path& base, const fs::path& dir) {
                Scenario s;
                const auto problems = read_scenario(c, s);
                if (!problems.empty()) throw DataError(fmt::format("{}", fmt::join(problems, "; ")));
                const auto report = execute(*s.command, s.params, base, explicit_seed || !s.has_seed ? seed : s.seed);
                emit(report, dir, quiet, out);
            };
            if (!is_pack(cfg)) {
                run_one(cfg, cfg_path.parent_path(), out_dir);
                return 0;
            }
            std::vector<std::string> problems;
            const auto entries = pack_entries(cfg, cfg_path.parent_path(), problems);
            if (!problems.empty()) throw DataError(fmt::format("{}: {}", config, fmt::join(problems, "; ")));
            for (const auto& p : entries) {
                try {
                    run_one(load_json(p), p.parent_path(), fs::path(out_dir) / p.stem());
                } catch (const Error& e) {
                    const auto msg = fmt::format("{}: {}", p.string(), e.what());
                    if (e.kind() == Error::Kind::Numeric) throw NumericError(msg);
                    throw DataError(msg);
                }
            }
            return 0;
        }

        for (const auto& [command, sub] : leaves) {
            if (!sub->parsed()) continue;
            json params = json::object();
            for (const auto& f : command->fields) {
                auto* opt = sub->get_option(flag_name(f.key));
                if (opt->count() == 0) continue;
                params[f.key] = parse_flag_value(f.kind, f.key, raw[command->name][f.key]);
            }
            emit(execute(*command, params, fs::current_path(), seed), out_dir, quiet, out);
            return 0;
        }
        err << app.help();
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e);
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace cyield::app
