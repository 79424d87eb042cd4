#include "eoconv/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace eoconv {

namespace {

double parse_number(const std::string& token, std::size_t line) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ParseError("not a number: '" + token + "'", line);
    return value;
}

std::vector<std::string> split_ws(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream stream(text);
    std::string token;
    while (stream >> token) tokens.push_back(token);
    return tokens;
}

// "# key: value" -> value; empty when the line is not that header.
std::string header_value(const std::string& line, const std::string& key) {
    const std::string prefix = "# " + key + ":";
    if (line.rfind(prefix, 0) != 0) return {};
    std::string value = line.substr(prefix.size());
    const auto first = value.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = value.find_last_not_of(" \t\r");
    return value.substr(first, last - first + 1);
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

} // namespace

SpectrumTrace parse_trace(std::istream& in, const std::string& origin) {
    SpectrumTrace trace;
    bool have_kind = false;
    std::size_t line_no = 0;
    std::size_t n_cols = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (const auto kind = header_value(line, "kind"); !kind.empty()) {
                try {
                    trace.kind = trace_kind_from_string(kind);
                } catch (const Error&) {
                    throw ParseError(origin + ": unknown trace kind '" + kind + "'",
                                     line_no);
                }
                have_kind = true;
            } else if (const auto x = header_value(line, "x"); !x.empty()) {
                trace.x_label = x;
            } else if (const auto y = header_value(line, "y"); !y.empty()) {
                trace.y_label = y;
            }
            continue;
        }
        const auto tokens = split_ws(line);
        if (tokens.size() != 2 && tokens.size() != 3)
            throw ParseError(origin + ": expected 2 or 3 columns, got " +
                                 std::to_string(tokens.size()),
                             line_no);
        if (n_cols == 0) n_cols = tokens.size();
        if (tokens.size() != n_cols)
            throw ParseError(origin + ": inconsistent column count", line_no);
        trace.x.push_back(parse_number(tokens[0], line_no));
        trace.y.push_back(parse_number(tokens[1], line_no));
        if (n_cols == 3) trace.y2.push_back(parse_number(tokens[2], line_no));
    }
    if (!have_kind)
        throw ParseError(origin + ": missing '# kind:' header", line_no);
    try {
        trace.validate();
    } catch (const Error& e) {
        throw ParseError(origin + ": " + e.what(), line_no);
    }
    return trace;
}

SpectrumTrace read_trace(const std::string& path) {
    auto in = open_input(path);
    return parse_trace(in, path);
}

void write_trace(std::ostream& out, const SpectrumTrace& trace) {
    trace.validate();
    out << "# eoconv trace\n";
    out << "# kind: " << to_string(trace.kind) << "\n";
    if (!trace.x_label.empty()) out << "# x: " << trace.x_label << "\n";
    if (!trace.y_label.empty()) out << "# y: " << trace.y_label << "\n";
    for (std::size_t i = 0; i < trace.x.size(); ++i) {
        out << format_g17(trace.x[i]) << ' ' << format_g17(trace.y[i]);
        if (trace.has_second_branch()) out << ' ' << format_g17(trace.y2[i]);
        out << '\n';
    }
}

void write_trace(const std::string& path, const SpectrumTrace& trace) {
    auto out = open_output(path);
    write_trace(out, trace);
    if (!out) throw IoError("write failed: " + path);
}

FieldProfile parse_profile(std::istream& in, const std::string& origin) {
    FieldProfile profile;
    bool have_r = false;
    bool have_z = false;
    std::size_t line_no = 0;
    std::size_t row = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto tokens = split_ws(line);
            // "# r0 <v> dr <v> nr <count>" and the z analogue.
            if (tokens.size() == 7 && tokens[1] == "r0" && tokens[3] == "dr" &&
                tokens[5] == "nr") {
                profile.grid.r0 = parse_number(tokens[2], line_no);
                profile.grid.dr = parse_number(tokens[4], line_no);
                profile.grid.nr =
                    static_cast<std::size_t>(parse_number(tokens[6], line_no));
                have_r = true;
            } else if (tokens.size() == 7 && tokens[1] == "z0" && tokens[3] == "dz" &&
                       tokens[5] == "nz") {
                profile.grid.z0 = parse_number(tokens[2], line_no);
                profile.grid.dz = parse_number(tokens[4], line_no);
                profile.grid.nz =
                    static_cast<std::size_t>(parse_number(tokens[6], line_no));
                have_z = true;
            }
            continue;
        }
        if (!have_r || !have_z)
            throw ParseError(origin + ": grid headers must precede data", line_no);
        if (profile.values.empty()) {
            try {
                profile.grid.validate();
            } catch (const Error& e) {
                throw ParseError(origin + ": " + e.what(), line_no);
            }
            profile.values.resize(profile.grid.nr * profile.grid.nz);
        }
        const auto tokens = split_ws(line);
        if (tokens.size() != 4)
            throw ParseError(origin + ": expected 4 columns (r z re im)", line_no);
        if (row >= profile.values.size())
            throw ParseError(origin + ": more rows than nr*nz", line_no);
        const double r = parse_number(tokens[0], line_no);
        const double z = parse_number(tokens[1], line_no);
        const std::size_t i = row / profile.grid.nz;
        const std::size_t j = row % profile.grid.nz;
        if (std::abs(r - profile.grid.r_at(i)) > 1e-6 * profile.grid.dr ||
            std::abs(z - profile.grid.z_at(j)) > 1e-6 * profile.grid.dz)
            throw ParseError(origin + ": sample position off the declared grid",
                             line_no);
        profile.values[row] = {parse_number(tokens[2], line_no),
                               parse_number(tokens[3], line_no)};
        ++row;
    }
    if (!have_r || !have_z)
        throw ParseError(origin + ": missing grid headers", line_no);
    if (row != profile.grid.nr * profile.grid.nz)
        throw ParseError(origin + ": row count does not match nr*nz", line_no);
    return profile;
}

FieldProfile read_profile(const std::string& path) {
    auto in = open_input(path);
    return parse_profile(in, path);
}

void write_profile(std::ostream& out, const FieldProfile& profile) {
    profile.validate();
    out << "# eoconv profile\n";
    out << "# r0 " << format_g17(profile.grid.r0) << " dr "
        << format_g17(profile.grid.dr) << " nr " << profile.grid.nr << "\n";
    out << "# z0 " << format_g17(profile.grid.z0) << " dz "
        << format_g17(profile.grid.dz) << " nz " << profile.grid.nz << "\n";
    out << "# columns: r z re im\n";
    for (std::size_t i = 0; i < profile.grid.nr; ++i) {
        for (std::size_t j = 0; j < profile.grid.nz; ++j) {
            const auto v = profile.at(i, j);
            out << format_g17(profile.grid.r_at(i)) << ' '
                << format_g17(profile.grid.z_at(j)) << ' ' << format_g17(v.real())
                << ' ' << format_g17(v.imag()) << '\n';
        }
    }
}

void write_profile(const std::string& path, const FieldProfile& profile) {
    auto out = open_output(path);
    write_profile(out, profile);
    if (!out) throw IoError("write failed: " + path);
}

} // namespace eoconv
