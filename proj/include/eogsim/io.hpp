#pragma once

// Text formats: trace CSV (time_s,v_p_uV,v_ref_uV), gaze scripts
// (direction,onset_s,duration_s,amplitude_uV), command and motor logs,
// filter coefficient dumps. Numbers are written with 17 significant
// digits so a save/load round trip is lossless.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "eogsim/decision.hpp"
#include "eogsim/error.hpp"
#include "eogsim/filter.hpp"
#include "eogsim/motor.hpp"
#include "eogsim/signal.hpp"

namespace eogsim {

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string strip(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_fields(std::string_view line, char sep = ',') {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(strip(line.substr(start)));
            break;
        }
        out.push_back(strip(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

inline double parse_double(const std::string& field, std::size_t line_no) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ValidationError("line " + std::to_string(line_no) + ": invalid number '" + field +
                              "'");
    return v;
}

inline Direction parse_direction(const std::string& field, std::size_t line_no) {
    std::string lower;
    for (char ch : field) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (lower == "left") return Direction::Left;
    if (lower == "right") return Direction::Right;
    throw ValidationError("line " + std::to_string(line_no) + ": unknown direction '" + field +
                          "' (expected Left or Right)");
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    return out;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    return in;
}

}  // namespace detail

inline constexpr const char* kTraceCsvHeader = "time_s,v_p_uV,v_ref_uV";

inline void save_trace_csv(const SampleTrace& trace, std::ostream& out) {
    validate_trace(trace);
    out << kTraceCsvHeader << '\n';
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out << detail::format_double(trace.time_at(i)) << ','
            << detail::format_double(trace.v_p_uV[i]) << ','
            << detail::format_double(trace.v_ref_uV[i]) << '\n';
    }
}

inline void save_trace_csv(const SampleTrace& trace, const std::string& path) {
    auto out = detail::open_output(path);
    save_trace_csv(trace, out);
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

/// Loads a trace CSV. The sample rate is inferred from the first two
/// timestamps (so at least two rows are required) and every subsequent
/// spacing must agree with it to within one part in 10^6.
inline SampleTrace load_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError("line 1: missing header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = detail::split_fields(line);
    const std::vector<std::string> expected = {"time_s", "v_p_uV", "v_ref_uV"};
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i >= header.size())
            throw ValidationError("line 1: missing column '" + expected[i] + "' in header");
        if (header[i] != expected[i])
            throw ValidationError("line 1: expected column '" + expected[i] + "', found '" +
                                  header[i] + "'");
    }
    if (header.size() != expected.size())
        throw ValidationError("line 1: expected 3 columns, found " +
                              std::to_string(header.size()));

    std::vector<double> times, vp, vref;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::strip(line).empty()) continue;
        const auto fields = detail::split_fields(line);
        if (fields.size() != 3)
            throw ValidationError("line " + std::to_string(line_no) + ": expected 3 values, got " +
                                  std::to_string(fields.size()));
        times.push_back(detail::parse_double(fields[0], line_no));
        vp.push_back(detail::parse_double(fields[1], line_no));
        vref.push_back(detail::parse_double(fields[2], line_no));
    }
    if (times.size() < 2)
        throw ValidationError("need at least 2 data rows to infer the sample rate");

    const double dt = times[1] - times[0];
    if (!(dt > 0.0))
        throw ValidationError("line 3: timestamps must be strictly increasing");
    const double fs = 1.0 / dt;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double step = times[i] - times[i - 1];
        if (std::abs(step * fs - 1.0) > 1e-6)
            throw ValidationError("line " + std::to_string(i + 2) +
                                  ": non-uniform sample spacing");
    }

    SampleTrace trace{fs, std::move(vp), std::move(vref)};
    validate_trace(trace);
    return trace;
}

inline SampleTrace load_trace_csv(const std::string& path) {
    auto in = detail::open_input(path);
    return load_trace_csv(in);
}

/// Gaze script: one `direction,onset_s,duration_s,amplitude_uV` line
/// per event; blank lines and lines starting with '#' are skipped.
inline std::vector<GazeEvent> load_script(std::istream& in) {
    std::vector<GazeEvent> script;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = detail::strip(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto fields = detail::split_fields(stripped);
        if (fields.size() != 4)
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": expected direction,onset_s,duration_s,amplitude_uV");
        GazeEvent e;
        e.direction = detail::parse_direction(fields[0], line_no);
        e.onset_s = detail::parse_double(fields[1], line_no);
        e.duration_s = detail::parse_double(fields[2], line_no);
        e.amplitude_uV = detail::parse_double(fields[3], line_no);
        script.push_back(e);
    }
    return script;
}

inline std::vector<GazeEvent> load_script(const std::string& path) {
    auto in = detail::open_input(path);
    return load_script(in);
}

inline void save_commands_csv(std::span<const Command> commands, std::ostream& out) {
    out << "time_s,direction\n";
    for (const Command& c : commands)
        out << detail::format_double(c.at_s) << ',' << to_string(c.direction) << '\n';
}

inline void save_commands_csv(std::span<const Command> commands, const std::string& path) {
    auto out = detail::open_output(path);
    save_commands_csv(commands, out);
}

inline void save_motor_log_csv(std::span<const MotorState> log, std::ostream& out) {
    out << "time_s,state\n";
    for (const MotorState& s : log)
        out << detail::format_double(s.since_s) << ',' << to_string(s.value) << '\n';
}

inline void save_motor_log_csv(std::span<const MotorState> log, const std::string& path) {
    auto out = detail::open_output(path);
    save_motor_log_csv(log, out);
}

inline void save_coeffs_csv(const BiquadCoeffs& c, std::ostream& out) {
    out << "b0,b1,b2,a1,a2,fs_hz\n"
        << detail::format_double(c.b0) << ',' << detail::format_double(c.b1) << ','
        << detail::format_double(c.b2) << ',' << detail::format_double(c.a1) << ','
        << detail::format_double(c.a2) << ',' << detail::format_double(c.fs_hz) << '\n';
}

inline void save_coeffs_csv(const BiquadCoeffs& c, const std::string& path) {
    auto out = detail::open_output(path);
    save_coeffs_csv(c, out);
}

}  // namespace eogsim
