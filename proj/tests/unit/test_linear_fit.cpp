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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "critsense/error.hpp"
#include "critsense/linear_fit.hpp"

namespace critsense {
namespace {

TEST(LineFit, ExactLine) {
    const std::vector<double> x = {0, 1, 2, 3};
    const std::vector<double> y = {1, 3, 5, 7};
    const LineFit f = fit_line(x, y);
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    EXPECT_NEAR(f.slope_err, 0.0, 1e-12);
    EXPECT_NEAR(f.x_intercept(), -0.5, 1e-14);
}

TEST(LineFit, StandardErrorMatchesTextbookFormula) {
    const std::vector<double> x = {0, 1, 2, 3, 4};
    const std::vector<double> y = {0.1, 0.9, 2.2, 2.8, 4.1};
    const LineFit f = fit_line(x, y);
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        rss += r * r;
    }
    const double sxx = 10.0;  // sum (x - 2)^2
    EXPECT_NEAR(f.slope_err, std::sqrt(rss / 3.0 / sxx), 1e-12);
}

TEST(LineFit, DegenerateInputs) {
    const std::vector<double> one = {1.0};
    EXPECT_THROW((void)fit_line(one, one), Error);
    const std::vector<double> x = {2, 2, 2};
    const std::vector<double> y = {1, 2, 3};
    EXPECT_THROW((void)fit_line(x, y), Error);
}

}  // namespace
}  // namespace critsense
