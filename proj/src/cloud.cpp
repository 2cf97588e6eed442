#include "nahmlab/cloud.hpp"

#include <algorithm>

#include "nahmlab/errors.hpp"

namespace nahmlab {

std::pair<double, double> hausdorff(const CurveCloud& a, const CurveCloud& b, const Lattice& lat) {
    if (a.points.empty() || b.points.empty())
        throw EmptyCloud("hausdorff: both clouds must be nonempty");
    auto directed = [&lat](const CurveCloud& from, const CurveCloud& to) {
        double worst = 0.0;
        for (const auto& p : from.points) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to.points) best = std::min(best, product_metric(p, q, lat));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return {directed(a, b), directed(b, a)};
}

} // namespace nahmlab
