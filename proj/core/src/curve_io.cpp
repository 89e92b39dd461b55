#include "wmgame/curve_io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wmgame/errors.hpp"

namespace wmgame {

namespace {

constexpr const char* kHeader = "k,acc,wsr,seed";

ValidationError line_error(const std::string& path, int line, const std::string& what) {
    return ValidationError(path + ": line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& field, const std::string& path, int line,
                    const char* name) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw line_error(path, line, std::string("malformed ") + name + " value '" + field + "'");
    return value;
}

std::int64_t parse_int(const std::string& field, const std::string& path, int line,
                       const char* name) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw line_error(path, line, std::string("malformed ") + name + " value '" + field + "'");
    return value;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    fields.push_back(current);
    return fields;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write_file(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot open for writing: " + tmp.string());
        out << contents;
        if (!out) throw ValidationError("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

PruneCurve read_curve_csv(const std::string& path, std::optional<CurveUnits> force_units) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open curve file: " + path);

    PruneCurve curve;
    std::string line;
    int lineno = 0;
    bool header_seen = false;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            auto start = body.find_first_not_of(' ');
            if (start == std::string::npos) continue;
            body = body.substr(start);
            auto eq = body.find('=');
            if (eq == std::string::npos)
                throw line_error(path, lineno, "metadata line must be '# key=value'");
            curve.metadata[body.substr(0, eq)] = body.substr(eq + 1);
            continue;
        }
        if (!header_seen) {
            if (line != kHeader)
                throw line_error(path, lineno,
                                 "header must be '" + std::string(kHeader) + "', got '" + line + "'");
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields = split_fields(line);
        if (fields.size() != 4)
            throw line_error(path, lineno, "expected 4 comma-separated fields, got " +
                                               std::to_string(fields.size()));
        CurvePoint p;
        p.k = parse_double(fields[0], path, lineno, "k");
        p.acc = parse_double(fields[1], path, lineno, "acc");
        p.wsr = parse_double(fields[2], path, lineno, "wsr");
        p.seed = parse_int(fields[3], path, lineno, "seed");

        bool percent = force_units.has_value()
                           ? *force_units == CurveUnits::Percent
                           : [&] {
                                 auto it = curve.metadata.find("units");
                                 return it != curve.metadata.end() && it->second == "percent";
                             }();
        if (percent) {
            p.acc /= 100.0;
            p.wsr /= 100.0;
        }
        if (!(p.k >= 0.0 && p.k <= 1.0))
            throw line_error(path, lineno, "k out of range [0, 1]: " + fields[0]);
        if (!(p.acc >= 0.0 && p.acc <= 1.0))
            throw line_error(path, lineno, "acc out of range [0, 1]: " + fields[1]);
        if (!(p.wsr >= 0.0 && p.wsr <= 1.0))
            throw line_error(path, lineno, "wsr out of range [0, 1]: " + fields[2]);
        curve.points.push_back(p);
    }
    if (!header_seen) throw ValidationError(path + ": missing '" + kHeader + "' header");

    // Values are fractions from here on.
    auto it = curve.metadata.find("units");
    if (it != curve.metadata.end()) it->second = "fraction";

    std::sort(curve.points.begin(), curve.points.end(),
              [](const CurvePoint& lhs, const CurvePoint& rhs) {
                  if (lhs.seed != rhs.seed) return lhs.seed < rhs.seed;
                  return lhs.k < rhs.k;
              });
    return curve;
}

void write_curve_csv(const PruneCurve& curve, const std::string& path) {
    std::vector<CurvePoint> points = curve.points;
    std::sort(points.begin(), points.end(),
              [](const CurvePoint& lhs, const CurvePoint& rhs) {
                  if (lhs.seed != rhs.seed) return lhs.seed < rhs.seed;
                  return lhs.k < rhs.k;
              });

    std::ostringstream out;
    for (const auto& [key, value] : curve.metadata)
        out << "# " << key << "=" << value << "\n";
    out << kHeader << "\n";
    for (const auto& p : points) {
        out << format_double(p.k) << ',' << format_double(p.acc) << ','
            << format_double(p.wsr) << ',' << p.seed << "\n";
    }
    atomic_write_file(path, out.str());
}

} // namespace wmgame
