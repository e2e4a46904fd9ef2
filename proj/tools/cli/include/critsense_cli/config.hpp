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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace critsense::cli {

enum class Command { Sweep, Scaling, Precision, Traces, Calibrate, Classical };

[[nodiscard]] std::string_view to_string(Command c) noexcept;

/// Scalar kinds a key can hold. Frequencies are stored as rad/s, times as s.
enum class ValueKind { Real, Integer, Frequency, Time, Boolean, Text, RealList, FrequencyList };

using Value = std::variant<double, std::int64_t, bool, std::string, std::vector<double>>;

struct Entry {
    Value value;
    int line = 0;  ///< 0 for values injected by a preset
};

struct RunConfig {
    Command command = Command::Sweep;
    std::map<std::string, Entry, std::less<>> params;
    std::filesystem::path output_dir;
    std::uint64_t seed = 0;
    int threads = 1;

    [[nodiscard]] bool has(std::string_view key) const;
    [[nodiscard]] double real(std::string_view key) const;
    [[nodiscard]] std::int64_t integer(std::string_view key) const;
    [[nodiscard]] bool boolean(std::string_view key) const;
    [[nodiscard]] const std::string& text(std::string_view key) const;
    [[nodiscard]] const std::vector<double>& list(std::string_view key) const;

    [[nodiscard]] double real_or(std::string_view key, double fallback) const;
    [[nodiscard]] std::int64_t integer_or(std::string_view key, std::int64_t fallback) const;
    [[nodiscard]] bool boolean_or(std::string_view key, bool fallback) const;
};

/// Parses `key = value` lines with `#` comments. Frequency keys need a unit
/// (hz, khz, mhz, ghz), time keys need one of (s, ms, us, ns). Lists are
/// comma-separated. A `preset = table<t>_row<k>` line fills in the operating
/// point; explicit keys override it regardless of order. Throws ParseError,
/// UnknownKey (including keys the command does not use) or MissingKey, each
/// with the offending line number where one exists.
/// When `command` is given it supplies the command if the text has none and
/// must agree with it otherwise.
[[nodiscard]] RunConfig parse_config(std::string_view text, std::optional<Command> command = std::nullopt);

[[nodiscard]] std::optional<Command> parse_command(std::string_view name);

/// Canonical `key = value` dump in SI units, sorted by key.
[[nodiscard]] std::string describe(const RunConfig& config);

/// Parses "<number><unit>" for the given kind; exposed for tests.
[[nodiscard]] Value parse_value(std::string_view text, ValueKind kind, int line);

}  // namespace critsense::cli
