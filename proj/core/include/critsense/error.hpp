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

#include <stdexcept>
#include <string>
#include <string_view>

namespace critsense {

/// Failure categories surfaced by the library. The CLI writes these names
/// verbatim into its machine-readable error records.
enum class ErrorCode {
    InvalidArgument,
    NoConvergence,
    TruncationLeak,
    StepFailure,
    NegativeEigenvalue,
    NoTransition,
    DegenerateFit,
    InvalidNoise,
    MomentInfeasible,
    ParseError,
    ShapeError,
    FluxSingularity,
    RootNotBracketed,
    FitDiverged,
    InsufficientSpan,
    UnknownKey,
    MissingKey,
    IoError,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, int line = 0);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    /// 1-based source line for parse errors, 0 otherwise.
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    ErrorCode code_;
    int line_;
};

}  // namespace critsense
