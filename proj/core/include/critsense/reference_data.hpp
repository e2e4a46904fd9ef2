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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "critsense/metrology.hpp"

namespace critsense {

/// One device operating point. Rates are converted to rad/s on load.
struct OperatingPoint {
    std::string section;  ///< "table1" (Scaling I) or "table2" (Scaling II)
    int row = 0;          ///< 1-based within the section
    double F = 0.0;       ///< flux bias, radians
    double omega_r = 0.0;
    double omega_p_lo = 0.0;
    double omega_p_hi = 0.0;
    double U = 0.0;
    double L = 1.0;
    double kappa = 0.0;
    double G = 0.0;

    /// Detuning window omega_r - omega_p/2 covered by the pump range.
    [[nodiscard]] double delta_lo() const { return omega_r - 0.5 * omega_p_hi; }
    [[nodiscard]] double delta_hi() const { return omega_r - 0.5 * omega_p_lo; }
    [[nodiscard]] Scaling scaling() const { return section == "table2" ? Scaling::II : Scaling::I; }
    /// Reduced parameters whose to_physical image reproduces (G, U, kappa) of this row.
    [[nodiscard]] ReducedParams reduced(double physical_delta = 0.0) const;
    /// The row's detuning window in reduced units.
    [[nodiscard]] double tilde_delta_lo() const;
    [[nodiscard]] double tilde_delta_hi() const;
};

/// Parses the reference CSV (header plus optional "# section: name" markers).
/// Throws ParseError with the offending line number.
[[nodiscard]] std::vector<OperatingPoint> parse_operating_points(std::string_view text);
[[nodiscard]] std::vector<OperatingPoint> load_operating_points(const std::filesystem::path& path);
/// Dataset compiled into the library.
[[nodiscard]] const std::vector<OperatingPoint>& bundled_operating_points();

/// Looks up "table1_row<k>" or "table2_row<k>". Throws UnknownKey otherwise.
[[nodiscard]] const OperatingPoint& preset(std::string_view name);
[[nodiscard]] std::vector<std::string> preset_names();

}  // namespace critsense
