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
#include <iosfwd>
#include <string>
#include <vector>

#include "critsense_cli/config.hpp"

namespace critsense::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "CRITSENSE_OUT_DIR";

struct RunResult {
    int exit_code = kExitSuccess;
    std::vector<std::filesystem::path> files;  ///< artifacts written, in creation order
    std::size_t point_errors = 0;              ///< rows in errors.csv
};

/// Executes the configured command into config.output_dir. Writes a manifest
/// and an errors.csv next to the results. Per-point failures are recorded and
/// the run continues; any such failure makes the exit code kExitDomainError.
/// Errors that abort the whole run propagate as critsense::Error after the
/// error record has been written.
RunResult run(const RunConfig& config, std::ostream& log);

/// Stream-splitting seed for the k-th independent random stream of a run.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Minimal standalone SVG line plot.
struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};
[[nodiscard]] std::string svg_plot(const std::string& title, const std::string& x_label,
                                   const std::vector<Series>& series);

}  // namespace critsense::cli
