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

#include <cstddef>
#include <span>

namespace critsense {

/// Ordinary least-squares line y = slope * x + intercept.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_err = 0.0;      ///< standard error of the slope
    double intercept_err = 0.0;  ///< standard error of the intercept
    double residual_ss = 0.0;
    std::size_t count = 0;

    [[nodiscard]] double x_intercept() const { return -intercept / slope; }
};

/// Throws DegenerateFit for mismatched lengths, fewer than two points or zero
/// spread in x. Standard errors are zero when only two points are given.
[[nodiscard]] LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace critsense
