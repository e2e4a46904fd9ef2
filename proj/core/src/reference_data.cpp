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

#include "critsense/reference_data.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "critsense/error.hpp"
#include "critsense/units.hpp"

namespace critsense {

namespace detail {
extern const std::string_view kOperatingPointsCsv;
}  // namespace detail

namespace {

constexpr std::string_view kHeader = "F,omega_r_GHz,omega_p_lo_GHz,omega_p_hi_GHz,U_kHz,L,kappa_kHz,G_kHz";

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

double to_number(std::string_view text, int line) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'", line);
    }
    return v;
}

}  // namespace

ReducedParams OperatingPoint::reduced(double physical_delta) const {
    ReducedParams rp;
    rp.L = L;
    rp.scaling = scaling();
    if (rp.scaling == Scaling::I) {
        rp.tilde_delta = physical_delta;
        rp.tilde_G = G;
        rp.tilde_U = U * L;
        rp.tilde_kappa = kappa;
    } else {
        rp.tilde_delta = physical_delta / L;
        rp.tilde_G = G / L;
        rp.tilde_U = U;
        rp.tilde_kappa = kappa / L;
    }
    return rp;
}

double OperatingPoint::tilde_delta_lo() const { return scaling() == Scaling::I ? delta_lo() : delta_lo() / L; }
double OperatingPoint::tilde_delta_hi() const { return scaling() == Scaling::I ? delta_hi() : delta_hi() / L; }

std::vector<OperatingPoint> parse_operating_points(std::string_view text) {
    std::vector<OperatingPoint> out;
    std::string section;
    bool header_seen = false;
    int line_no = 0;
    int row_in_section = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            const std::string_view body = trim(line.substr(1));
            constexpr std::string_view kMarker = "section:";
            if (body.starts_with(kMarker)) {
                section = std::string(trim(body.substr(kMarker.size())));
                row_in_section = 0;
            }
            continue;
        }
        if (!header_seen) {
            if (line != kHeader) {
                throw Error(ErrorCode::ParseError, "unexpected header, want " + std::string(kHeader), line_no);
            }
            header_seen = true;
            continue;
        }
        if (section.empty()) {
            throw Error(ErrorCode::ParseError, "data row before any '# section:' marker", line_no);
        }
        double v[8];
        std::size_t field = 0;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (field >= 8) {
                throw Error(ErrorCode::ParseError, "more than 8 columns", line_no);
            }
            v[field++] = to_number(line.substr(start, comma == std::string_view::npos ? comma : comma - start), line_no);
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (field != 8) {
            throw Error(ErrorCode::ParseError, "expected 8 columns", line_no);
        }
        OperatingPoint op;
        op.section = section;
        op.row = ++row_in_section;
        op.F = v[0];
        op.omega_r = units::ghz(v[1]);
        op.omega_p_lo = units::ghz(v[2]);
        op.omega_p_hi = units::ghz(v[3]);
        op.U = units::khz(v[4]);
        op.L = v[5];
        op.kappa = units::khz(v[6]);
        op.G = units::khz(v[7]);
        out.push_back(op);
    }
    if (!header_seen) {
        throw Error(ErrorCode::ParseError, "missing header", line_no);
    }
    return out;
}

std::vector<OperatingPoint> load_operating_points(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_operating_points(buf.str());
}

const std::vector<OperatingPoint>& bundled_operating_points() {
    static const std::vector<OperatingPoint> points = parse_operating_points(detail::kOperatingPointsCsv);
    return points;
}

const OperatingPoint& preset(std::string_view name) {
    for (const auto& op : bundled_operating_points()) {
        if (name == op.section + "_row" + std::to_string(op.row)) {
            return op;
        }
    }
    throw Error(ErrorCode::UnknownKey, "unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& op : bundled_operating_points()) {
        names.push_back(op.section + "_row" + std::to_string(op.row));
    }
    return names;
}

}  // namespace critsense
