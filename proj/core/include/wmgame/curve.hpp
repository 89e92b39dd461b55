#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wmgame {

// One measured or simulated operating point of a pruning attack.
struct CurvePoint {
    double k = 0.0;
    double acc = 0.0;
    double wsr = 0.0;
    std::int64_t seed = 0;
};

// Interchange format between simulator, fitter and external data: an
// ordered list of (k, acc, wsr, seed) rows plus free-form metadata.
// Rows are kept sorted by (seed, k); metadata keys serialize sorted.
struct PruneCurve {
    std::vector<CurvePoint> points;
    std::map<std::string, std::string> metadata;
};

// Distinct seeds in ascending order.
std::vector<std::int64_t> curve_seeds(const PruneCurve& curve);

// Rows belonging to one seed, in k order.
PruneCurve curve_for_seed(const PruneCurve& curve, std::int64_t seed);

// Seed-averaged view: one (k, mean acc, mean wsr) triple per distinct k,
// ascending in k. Replicates are first averaged per (k, seed), then
// across seeds, so duplicating every row leaves the result bit-identical.
struct AveragedPoint {
    double k = 0.0;
    double acc = 0.0;
    double wsr = 0.0;
};
std::vector<AveragedPoint> seed_averaged(const PruneCurve& curve);

} // namespace wmgame
