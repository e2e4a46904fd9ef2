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

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "critsense/error.hpp"
#include "critsense/measurement.hpp"

namespace critsense {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, int line) {
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw Error(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'", line);
    }
    return value;
}

long long parse_int(std::string_view text, int line) {
    text = trim(text);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw Error(ErrorCode::ParseError, "not an integer: '" + std::string(text) + "'", line);
    }
    return value;
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) {
        throw Error(ErrorCode::IoError, "cannot format number");
    }
    return {buf.data(), ptr};
}

void write_traces(std::ostream& out, const TraceEnsemble& te) {
    te.validate();
    out << "# m=" << te.m() << " j=" << te.j() << " dt=" << format_double(te.model.delta_t)
        << " gain=" << format_double(te.model.gain) << " sigma2=" << format_double(te.model.sigma2) << '\n';
    std::string row;
    for (int r = 0; r < te.m(); ++r) {
        row.clear();
        for (int c = 0; c < te.j(); ++c) {
            if (c > 0) {
                row += ',';
            }
            row += format_double(te.i_samples(r, c));
            row += ',';
            row += format_double(te.q_samples(r, c));
        }
        row += '\n';
        out << row;
    }
    if (!out) {
        throw Error(ErrorCode::IoError, "write failed");
    }
}

void export_traces(const std::filesystem::path& path, const TraceEnsemble& te) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    }
    write_traces(out, te);
}

TraceEnsemble read_traces(std::istream& in, const MeasurementModel& model) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::ParseError, "empty trace file", 1);
    }
    ++line_no;
    std::string_view header = trim(line);
    if (header.empty() || header.front() != '#') {
        throw Error(ErrorCode::ParseError, "missing '# m=... j=...' header", line_no);
    }
    header.remove_prefix(1);

    long long m = -1;
    long long j = -1;
    MeasurementModel out_model = model;
    bool have_dt = false;
    bool have_gain = false;
    bool have_sigma2 = false;
    std::istringstream tokens{std::string(header)};
    std::string token;
    while (tokens >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ParseError, "header token without '=': " + token, line_no);
        }
        const std::string key = token.substr(0, eq);
        const std::string_view value = std::string_view(token).substr(eq + 1);
        if (key == "m") {
            m = parse_int(value, line_no);
        } else if (key == "j") {
            j = parse_int(value, line_no);
        } else if (key == "dt") {
            out_model.delta_t = parse_double(value, line_no);
            have_dt = true;
        } else if (key == "gain") {
            out_model.gain = parse_double(value, line_no);
            have_gain = true;
        } else if (key == "sigma2") {
            out_model.sigma2 = parse_double(value, line_no);
            have_sigma2 = true;
        } else {
            throw Error(ErrorCode::ParseError, "unknown header key: " + key, line_no);
        }
    }
    if (m < 1 || j < 1 || !have_dt || !have_gain || !have_sigma2) {
        throw Error(ErrorCode::ParseError, "header must give m>=1, j>=1, dt, gain and sigma2", line_no);
    }
    out_model.total_time = static_cast<double>(j) * out_model.delta_t;

    TraceEnsemble te;
    te.i_samples.resize(m, j);
    te.q_samples.resize(m, j);
    te.model = out_model;
    long long row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty()) {
            continue;
        }
        if (row >= m) {
            throw Error(ErrorCode::ShapeError, "more rows than m=" + std::to_string(m), line_no);
        }
        long long field = 0;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = body.find(',', start);
            const std::string_view cell =
                body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            if (field >= 2 * j) {
                throw Error(ErrorCode::ShapeError, "row has more than 2j=" + std::to_string(2 * j) + " fields",
                            line_no);
            }
            const double v = parse_double(cell, line_no);
            if (field % 2 == 0) {
                te.i_samples(row, field / 2) = v;
            } else {
                te.q_samples(row, field / 2) = v;
            }
            ++field;
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (field != 2 * j) {
            throw Error(ErrorCode::ShapeError,
                        "row has " + std::to_string(field) + " fields, expected " + std::to_string(2 * j), line_no);
        }
        ++row;
    }
    if (row != m) {
        throw Error(ErrorCode::ShapeError, "found " + std::to_string(row) + " rows, expected m=" + std::to_string(m),
                    line_no);
    }
    return te;
}

TraceEnsemble ingest_traces(const std::filesystem::path& path, const MeasurementModel& model) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    return read_traces(in, model);
}

}  // namespace critsense
