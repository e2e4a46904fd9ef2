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

#include "critsense/error.hpp"

namespace critsense {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::TruncationLeak: return "TruncationLeak";
        case ErrorCode::StepFailure: return "StepFailure";
        case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
        case ErrorCode::NoTransition: return "NoTransition";
        case ErrorCode::DegenerateFit: return "DegenerateFit";
        case ErrorCode::InvalidNoise: return "InvalidNoise";
        case ErrorCode::MomentInfeasible: return "MomentInfeasible";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ShapeError: return "ShapeError";
        case ErrorCode::FluxSingularity: return "FluxSingularity";
        case ErrorCode::RootNotBracketed: return "RootNotBracketed";
        case ErrorCode::FitDiverged: return "FitDiverged";
        case ErrorCode::InsufficientSpan: return "InsufficientSpan";
        case ErrorCode::UnknownKey: return "UnknownKey";
        case ErrorCode::MissingKey: return "MissingKey";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

namespace {
std::string decorate(ErrorCode code, const std::string& message, int line) {
    std::string out{to_string(code)};
    if (line > 0) {
        out += " (line " + std::to_string(line) + ")";
    }
    out += ": ";
    out += message;
    return out;
}
}  // namespace

Error::Error(ErrorCode code, const std::string& message, int line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line) {}

}  // namespace critsense
