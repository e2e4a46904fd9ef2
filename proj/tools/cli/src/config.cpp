// Copyright 2026 The critsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "critsense_cli/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <sstream>
#include <system_error>

#include "critsense/error.hpp"
#include "critsense/measurement.hpp"
#include "critsense/reference_data.hpp"
#include "critsense/units.hpp"

namespace critsense::cli {

namespace {

constexpr unsigned bit(Command c) { return 1u << static_cast<unsigned>(c); }

constexpr unsigned kAll = bit(Command::Sweep) | bit(Command::Scaling) | bit(Command::Precision) |
                          bit(Command::Traces) | bit(Command::Calibrate) | bit(Command::Classical);
constexpr unsigned kCurves = bit(Command::Sweep) | bit(Command::Scaling);
constexpr unsigned kPhysics = kCurves | bit(Command::Precision) | bit(Command::Traces);
constexpr unsigned kSinglePoint = bit(Command::Precision) | bit(Command::Traces);

struct KeySpec {
    std::string_view name;
    ValueKind kind;
    unsigned commands;
};

// clang-format off
constexpr std::array kKeys = {
    KeySpec{"command",      ValueKind::Text,          kAll},
    KeySpec{"seed",         ValueKind::Integer,       kAll},
    KeySpec{"threads",      ValueKind::Integer,       kAll},
    KeySpec{"output_dir",   ValueKind::Text,          kAll},
    KeySpec{"svg",          ValueKind::Boolean,       kCurves | bit(Command::Classical)},
    KeySpec{"preset",       ValueKind::Text,          kPhysics},
    KeySpec{"scaling",      ValueKind::Text,          kPhysics},
    KeySpec{"L",            ValueKind::Real,          kPhysics & ~bit(Command::Scaling)},
    KeySpec{"L_values",     ValueKind::RealList,      bit(Command::Scaling)},
    KeySpec{"G",            ValueKind::Frequency,     kPhysics},
    KeySpec{"U",            ValueKind::Frequency,     kPhysics},
    KeySpec{"kappa",        ValueKind::Frequency,     kPhysics},
    KeySpec{"min_dim",      ValueKind::Integer,       kPhysics},
    KeySpec{"max_dim",      ValueKind::Integer,       kPhysics},
    KeySpec{"gain",         ValueKind::Real,          kPhysics},
    KeySpec{"sigma2",       ValueKind::Real,          kPhysics},
    KeySpec{"noise_free",   ValueKind::Boolean,       kPhysics},
    KeySpec{"delta_t",      ValueKind::Time,          kPhysics},
    KeySpec{"total_time",   ValueKind::Time,          kPhysics},
    KeySpec{"j_ss_time",    ValueKind::Time,          kPhysics},
    KeySpec{"delta_lo",     ValueKind::Frequency,     kCurves},
    KeySpec{"delta_hi",     ValueKind::Frequency,     kCurves},
    KeySpec{"delta_step",   ValueKind::Frequency,     kCurves | bit(Command::Precision)},
    KeySpec{"delta",        ValueKind::Frequency,     kSinglePoint},
    KeySpec{"repetitions",  ValueKind::Real,          kCurves},
    KeySpec{"epsilon_err",  ValueKind::Frequency,     kCurves | bit(Command::Precision)},
    KeySpec{"error_form",   ValueKind::Text,          kCurves | bit(Command::Precision)},
    KeySpec{"autocorr",     ValueKind::Boolean,       kPhysics},
    KeySpec{"traces",       ValueKind::Integer,       kSinglePoint},
    KeySpec{"ingest",       ValueKind::Text,          bit(Command::Traces)},
    KeySpec{"gamma0",       ValueKind::Real,          bit(Command::Calibrate)},
    KeySpec{"omega_bare",   ValueKind::Frequency,     bit(Command::Calibrate)},
    KeySpec{"flux",         ValueKind::RealList,      bit(Command::Calibrate)},
    KeySpec{"l_cav",        ValueKind::Real,          bit(Command::Calibrate)},
    KeySpec{"c_cav",        ValueKind::Real,          bit(Command::Calibrate)},
    KeySpec{"c_j",          ValueKind::Real,          bit(Command::Calibrate)},
    KeySpec{"d",            ValueKind::Real,          bit(Command::Calibrate)},
    KeySpec{"s21_file",     ValueKind::Text,          bit(Command::Calibrate)},
    KeySpec{"kappa_ext",    ValueKind::Frequency,     bit(Command::Classical)},
    KeySpec{"alpha2",       ValueKind::Real,          bit(Command::Classical)},
    KeySpec{"delta_p_lo",   ValueKind::Frequency,     bit(Command::Classical)},
    KeySpec{"delta_p_hi",   ValueKind::Frequency,     bit(Command::Classical)},
    KeySpec{"delta_p_step", ValueKind::Frequency,     bit(Command::Classical)},
    KeySpec{"bandwidth",    ValueKind::Frequency,     bit(Command::Classical)},
    KeySpec{"time",         ValueKind::Time,          bit(Command::Classical)},
};
// clang-format on

const KeySpec* find_key(std::string_view name) {
    for (const auto& k : kKeys) {
        if (k.name == name) {
            return &k;
        }
    }
    return nullptr;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

/// Splits "1.5us" into the number and the unit suffix.
std::pair<double, std::string> number_and_unit(std::string_view text, int line) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr == text.data()) {
        throw Error(ErrorCode::ParseError, "expected a number, got '" + std::string(text) + "'", line);
    }
    const std::string_view rest = trim(std::string_view(ptr, static_cast<std::size_t>(text.data() + text.size() - ptr)));
    return {v, lower(rest)};
}

double frequency(std::string_view text, int line) {
    const auto [v, unit] = number_and_unit(text, line);
    if (unit == "hz") {
        return units::hz(v);
    }
    if (unit == "khz") {
        return units::khz(v);
    }
    if (unit == "mhz") {
        return units::mhz(v);
    }
    if (unit == "ghz") {
        return units::ghz(v);
    }
    throw Error(ErrorCode::ParseError,
                "frequency '" + std::string(trim(text)) + "' needs a unit: hz, khz, mhz or ghz", line);
}

double duration(std::string_view text, int line) {
    const auto [v, unit] = number_and_unit(text, line);
    if (unit == "s") {
        return v;
    }
    if (unit == "ms") {
        return 1e-3 * v;
    }
    if (unit == "us") {
        return 1e-6 * v;
    }
    if (unit == "ns") {
        return 1e-9 * v;
    }
    throw Error(ErrorCode::ParseError, "time '" + std::string(trim(text)) + "' needs a unit: s, ms, us or ns", line);
}

double plain(std::string_view text, int line) {
    const auto [v, unit] = number_and_unit(text, line);
    if (!unit.empty()) {
        throw Error(ErrorCode::ParseError, "unexpected unit '" + unit + "' on a dimensionless value", line);
    }
    return v;
}

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        out.push_back(trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) {
            return out;
        }
        start = comma + 1;
    }
}

std::optional<Command> command_from(std::string_view s) {
    constexpr std::array names = {std::pair{"sweep", Command::Sweep},         std::pair{"scaling", Command::Scaling},
                                  std::pair{"precision", Command::Precision}, std::pair{"traces", Command::Traces},
                                  std::pair{"calibrate", Command::Calibrate}, std::pair{"classical", Command::Classical}};
    for (const auto& [name, c] : names) {
        if (s == name) {
            return c;
        }
    }
    return std::nullopt;
}

void inject_preset(RunConfig& cfg, const std::string& name, int line) {
    const OperatingPoint* op = nullptr;
    try {
        op = &preset(name);
    } catch (const Error& e) {
        throw Error(ErrorCode::UnknownKey, "unknown preset '" + name + "'", line);
    }
    const ReducedParams rp = op->reduced();
    const std::array<std::pair<std::string_view, Value>, 7> values = {
        std::pair<std::string_view, Value>{"scaling", std::string(to_string(rp.scaling))},
        {"L", rp.L},
        {"G", rp.tilde_G},
        {"U", rp.tilde_U},
        {"kappa", rp.tilde_kappa},
        {"delta_lo", op->tilde_delta_lo()},
        {"delta_hi", op->tilde_delta_hi()},
    };
    for (const auto& [key, value] : values) {
        const KeySpec* spec = find_key(key);
        if ((spec->commands & bit(cfg.command)) == 0 || cfg.params.contains(key)) {
            continue;
        }
        cfg.params.emplace(std::string(key), Entry{value, 0});
    }
}

void require(const RunConfig& cfg, std::initializer_list<std::string_view> keys) {
    for (const auto key : keys) {
        if (!cfg.has(key)) {
            throw Error(ErrorCode::MissingKey,
                        "command '" + std::string(to_string(cfg.command)) + "' needs key '" + std::string(key) + "'");
        }
    }
}

template <typename T>
const T& get(const RunConfig& cfg, std::string_view key) {
    const auto it = cfg.params.find(key);
    if (it == cfg.params.end()) {
        throw Error(ErrorCode::MissingKey, "missing key '" + std::string(key) + "'");
    }
    const T* v = std::get_if<T>(&it->second.value);
    if (v == nullptr) {
        throw Error(ErrorCode::ParseError, "key '" + std::string(key) + "' has the wrong type", it->second.line);
    }
    return *v;
}

}  // namespace

std::string_view to_string(Command c) noexcept {
    switch (c) {
        case Command::Sweep: return "sweep";
        case Command::Scaling: return "scaling";
        case Command::Precision: return "precision";
        case Command::Traces: return "traces";
        case Command::Calibrate: return "calibrate";
        case Command::Classical: return "classical";
    }
    return "unknown";
}

bool RunConfig::has(std::string_view key) const { return params.find(key) != params.end(); }
double RunConfig::real(std::string_view key) const { return get<double>(*this, key); }
std::int64_t RunConfig::integer(std::string_view key) const { return get<std::int64_t>(*this, key); }
bool RunConfig::boolean(std::string_view key) const { return get<bool>(*this, key); }
const std::string& RunConfig::text(std::string_view key) const { return get<std::string>(*this, key); }
const std::vector<double>& RunConfig::list(std::string_view key) const {
    return get<std::vector<double>>(*this, key);
}
double RunConfig::real_or(std::string_view key, double fallback) const { return has(key) ? real(key) : fallback; }
std::int64_t RunConfig::integer_or(std::string_view key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
}
bool RunConfig::boolean_or(std::string_view key, bool fallback) const { return has(key) ? boolean(key) : fallback; }

Value parse_value(std::string_view text, ValueKind kind, int line) {
    text = trim(text);
    switch (kind) {
        case ValueKind::Real:
            return plain(text, line);
        case ValueKind::Integer: {
            std::int64_t v = 0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
                throw Error(ErrorCode::ParseError, "expected an integer, got '" + std::string(text) + "'", line);
            }
            return v;
        }
        case ValueKind::Frequency:
            return frequency(text, line);
        case ValueKind::Time:
            return duration(text, line);
        case ValueKind::Boolean: {
            const std::string s = lower(text);
            if (s == "true" || s == "yes" || s == "1") {
                return true;
            }
            if (s == "false" || s == "no" || s == "0") {
                return false;
            }
            throw Error(ErrorCode::ParseError, "expected true/false, got '" + std::string(text) + "'", line);
        }
        case ValueKind::Text:
            if (text.empty()) {
                throw Error(ErrorCode::ParseError, "empty value", line);
            }
            return std::string(text);
        case ValueKind::RealList:
        case ValueKind::FrequencyList: {
            std::vector<double> out;
            for (const auto item : split_list(text)) {
                out.push_back(kind == ValueKind::RealList ? plain(item, line) : frequency(item, line));
            }
            return out;
        }
    }
    throw Error(ErrorCode::ParseError, "unsupported value kind", line);
}

std::optional<Command> parse_command(std::string_view name) { return command_from(name); }

RunConfig parse_config(std::string_view text, std::optional<Command> command) {
    struct Raw {
        std::string key;
        std::string value;
        int line;
    };
    std::vector<Raw> raws;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::ParseError, "expected 'key = value'", line_no);
        }
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) {
            throw Error(ErrorCode::ParseError, "empty key", line_no);
        }
        for (const auto& r : raws) {
            if (r.key == key) {
                throw Error(ErrorCode::ParseError, "duplicate key '" + key + "' (first on line " +
                                                       std::to_string(r.line) + ")", line_no);
            }
        }
        raws.push_back({key, std::string(trim(line.substr(eq + 1))), line_no});
    }

    RunConfig cfg;
    const auto cmd_it = std::find_if(raws.begin(), raws.end(), [](const Raw& r) { return r.key == "command"; });
    if (cmd_it == raws.end()) {
        if (!command) {
            throw Error(ErrorCode::MissingKey, "missing key 'command'");
        }
        cfg.command = *command;
    } else {
        const auto cmd = command_from(cmd_it->value);
        if (!cmd) {
            throw Error(ErrorCode::ParseError, "unknown command '" + cmd_it->value + "'", cmd_it->line);
        }
        if (command && *command != *cmd) {
            throw Error(ErrorCode::ParseError,
                        "config is for '" + cmd_it->value + "' but '" + std::string(to_string(*command)) +
                            "' was requested",
                        cmd_it->line);
        }
        cfg.command = *cmd;
    }

    for (const auto& r : raws) {
        const KeySpec* spec = find_key(r.key);
        if (spec == nullptr) {
            throw Error(ErrorCode::UnknownKey, "unknown key '" + r.key + "'", r.line);
        }
        if ((spec->commands & bit(cfg.command)) == 0) {
            throw Error(ErrorCode::UnknownKey,
                        "key '" + r.key + "' is not used by command '" + std::string(to_string(cfg.command)) + "'",
                        r.line);
        }
        cfg.params.emplace(r.key, Entry{parse_value(r.value, spec->kind, r.line), r.line});
    }
    if (cfg.has("preset")) {
        inject_preset(cfg, cfg.text("preset"), cfg.params.find("preset")->second.line);
    }

    if (cfg.has("seed")) {
        const auto s = cfg.integer("seed");
        if (s < 0) {
            throw Error(ErrorCode::ParseError, "seed must be non-negative", cfg.params.find("seed")->second.line);
        }
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    if (cfg.has("threads")) {
        cfg.threads = static_cast<int>(cfg.integer("threads"));
    }
    if (cfg.has("output_dir")) {
        cfg.output_dir = cfg.text("output_dir");
    }
    if (cfg.has("scaling")) {
        const auto& s = cfg.text("scaling");
        if (s != "I" && s != "II") {
            throw Error(ErrorCode::ParseError, "scaling must be I or II", cfg.params.find("scaling")->second.line);
        }
    }
    if (cfg.has("error_form")) {
        const auto& s = cfg.text("error_form");
        if (s != "as_printed" && s != "sum_of_deviations") {
            throw Error(ErrorCode::ParseError, "error_form must be as_printed or sum_of_deviations",
                        cfg.params.find("error_form")->second.line);
        }
    }

    switch (cfg.command) {
        case Command::Sweep:
            require(cfg, {"scaling", "L", "G", "U", "kappa", "delta_lo", "delta_hi"});
            break;
        case Command::Scaling:
            require(cfg, {"scaling", "L_values", "G", "U", "kappa", "delta_lo", "delta_hi"});
            break;
        case Command::Precision:
            require(cfg, {"scaling", "L", "G", "U", "kappa", "delta"});
            break;
        case Command::Traces:
            if (!cfg.has("ingest")) {
                require(cfg, {"scaling", "L", "G", "U", "kappa", "delta"});
            }
            break;
        case Command::Calibrate:
            if (!cfg.has("s21_file")) {
                require(cfg, {"flux"});
            }
            if (cfg.has("flux")) {
                require(cfg, {"gamma0", "omega_bare"});
            }
            break;
        case Command::Classical:
            require(cfg, {"kappa_ext", "alpha2", "delta_p_lo", "delta_p_hi", "delta_p_step"});
            break;
    }
    return cfg;
}

std::string describe(const RunConfig& config) {
    std::ostringstream out;
    out << "command = " << to_string(config.command) << '\n';
    out << "seed = " << config.seed << '\n';
    for (const auto& [key, entry] : config.params) {
        if (key == "command" || key == "seed" || key == "threads" || key == "output_dir") {
            continue;
        }
        out << key << " = ";
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>) {
                    out << format_double(v);
                } else if constexpr (std::is_same_v<T, bool>) {
                    out << (v ? "true" : "false");
                } else if constexpr (std::is_same_v<T, std::vector<double>>) {
                    for (std::size_t i = 0; i < v.size(); ++i) {
                        out << (i ? ", " : "") << format_double(v[i]);
                    }
                } else {
                    out << v;
                }
            },
            entry.value);
        out << (entry.line == 0 ? "  # from preset" : "") << '\n';
    }
    return out.str();
}

}  // namespace critsense::cli
