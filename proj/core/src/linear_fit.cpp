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

#include "critsense/linear_fit.hpp"

#include <cmath>

#include "critsense/error.hpp"

namespace critsense {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(ErrorCode::DegenerateFit, "x and y lengths differ");
    }
    const std::size_t n = x.size();
    if (n < 2) {
        throw Error(ErrorCode::DegenerateFit, "need at least two points");
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    if (!(sxx > 0.0)) {
        throw Error(ErrorCode::DegenerateFit, "zero variance in x");
    }

    LineFit fit;
    fit.count = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = y[k] - (fit.slope * x[k] + fit.intercept);
        fit.residual_ss += r * r;
    }
    if (n > 2) {
        const double s2 = fit.residual_ss / static_cast<double>(n - 2);
        fit.slope_err = std::sqrt(s2 / sxx);
        double sum_x2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            sum_x2 += x[k] * x[k];
        }
        fit.intercept_err = std::sqrt(s2 * sum_x2 / (static_cast<double>(n) * sxx));
    }
    return fit;
}

}  // namespace critsense
