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

#include <numbers>

// All rates inside the library are angular frequencies in rad/s and all
// times are seconds. Values quoted as f/2pi (Hz) go through these helpers.
namespace critsense::units {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[nodiscard]] constexpr double hz(double f) noexcept { return kTwoPi * f; }
[[nodiscard]] constexpr double khz(double f) noexcept { return kTwoPi * 1e3 * f; }
[[nodiscard]] constexpr double mhz(double f) noexcept { return kTwoPi * 1e6 * f; }
[[nodiscard]] constexpr double ghz(double f) noexcept { return kTwoPi * 1e9 * f; }

/// rad/s -> Hz (value/2pi).
[[nodiscard]] constexpr double to_hz(double omega) noexcept { return omega / kTwoPi; }
[[nodiscard]] constexpr double to_khz(double omega) noexcept { return omega / (kTwoPi * 1e3); }

[[nodiscard]] constexpr double us(double t) noexcept { return 1e-6 * t; }
[[nodiscard]] constexpr double ns(double t) noexcept { return 1e-9 * t; }

inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kFluxQuantum = 2.067833848e-15;   // Wb
inline constexpr double kReducedFluxQuantum = kFluxQuantum / kTwoPi;

}  // namespace critsense::units
