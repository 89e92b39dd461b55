#include "wmgame/curve.hpp"

#include <algorithm>
#include <map>

namespace wmgame {

std::vector<std::int64_t> curve_seeds(const PruneCurve& curve) {
    std::vector<std::int64_t> seeds;
    for (const auto& p : curve.points) seeds.push_back(p.seed);
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    return seeds;
}

PruneCurve curve_for_seed(const PruneCurve& curve, std::int64_t seed) {
    PruneCurve out;
    out.metadata = curve.metadata;
    for (const auto& p : curve.points)
        if (p.seed == seed) out.points.push_back(p);
    std::sort(out.points.begin(), out.points.end(),
              [](const CurvePoint& lhs, const CurvePoint& rhs) { return lhs.k < rhs.k; });
    return out;
}

std::vector<AveragedPoint> seed_averaged(const PruneCurve& curve) {
    // Two-stage averaging: replicates within a (k, seed) cell first, then
    // across seeds. Balanced duplication therefore cannot perturb the
    // result even in the last bit.
    struct Acc {
        double acc_sum = 0.0;
        double wsr_sum = 0.0;
        int count = 0;
    };
    std::map<double, std::map<std::int64_t, Acc>> cells;
    for (const auto& p : curve.points) {
        Acc& cell = cells[p.k][p.seed];
        cell.acc_sum += p.acc;
        cell.wsr_sum += p.wsr;
        cell.count += 1;
    }
    std::vector<AveragedPoint> out;
    out.reserve(cells.size());
    for (const auto& [k, by_seed] : cells) {
        double acc_sum = 0.0;
        double wsr_sum = 0.0;
        for (const auto& [seed, cell] : by_seed) {
            acc_sum += cell.acc_sum / cell.count;
            wsr_sum += cell.wsr_sum / cell.count;
        }
        auto n = static_cast<double>(by_seed.size());
        out.push_back({k, acc_sum / n, wsr_sum / n});
    }
    return out;
}

} // namespace wmgame
