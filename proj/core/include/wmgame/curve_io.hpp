#pragma once

#include <optional>
#include <string>

#include "wmgame/curve.hpp"

namespace wmgame {

// Curve CSV interchange format.
//
//   # key=value            optional metadata lines, sorted on write
//   k,acc,wsr,seed         required header
//   0,0.7947,0.9039,0      rows sorted by (seed, k), LF endings, UTF-8
//
// Floats are written with 17 significant digits, so write -> read -> write
// round-trips byte-for-byte. The metadata key `units=percent` (or the
// `force_units` override) divides acc and wsr by 100 on read; curves are
// always held and written in fractions.

enum class CurveUnits { Fraction, Percent };

PruneCurve read_curve_csv(const std::string& path,
                          std::optional<CurveUnits> force_units = std::nullopt);

void write_curve_csv(const PruneCurve& curve, const std::string& path);

// Write-temp-then-rename; used for every output file.
void atomic_write_file(const std::string& path, const std::string& contents);

// 17-significant-digit float formatting shared by the CSV writers.
std::string format_double(double v);

} // namespace wmgame
