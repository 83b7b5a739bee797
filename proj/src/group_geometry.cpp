#include "fairspace/group_geometry.hpp"

#include <algorithm>
#include <limits>

#include "fairspace/rng.hpp"

namespace fairspace {

namespace {

void require_matching_groups(const GroupedMetricSpace& x, const GroupedMetricSpace& y) {
    if (x.group_count() != y.group_count())
        throw Error(Errc::group_count_mismatch,
                    std::to_string(x.group_count()) + " groups vs " +
                        std::to_string(y.group_count()));
}

}  // namespace

double between_group_distance(const GroupedMetricSpace& x, const GroupedMetricSpace& y) {
    require_matching_groups(x, y);
    int k = x.group_count();
    if (k < 2) throw Error(Errc::single_group, "between-group distance needs k >= 2");

    GroupLevelSpace gx = induce_group_space(x);
    GroupLevelSpace gy = induce_group_space(y);
    double gw = gromov_wasserstein_value(gx, gy);
    double pairs = static_cast<double>(k) * static_cast<double>(k - 1) / 2.0;
    return gw / pairs;
}

std::pair<double, std::vector<double>> within_group_distance(const GroupedMetricSpace& x,
                                                             const GroupedMetricSpace& y) {
    require_matching_groups(x, y);
    int k = x.group_count();
    std::vector<double> per_group(static_cast<size_t>(k), 0.0);
    // Within-group values only need the optimum, not the coupling; the exact
    // quantile method keeps large groups cheap.
    GwOptions fast;
    fast.method = GwMethod::quantile;
    for (int g = 0; g < k; ++g) {
        GroupedMetricSpace xg = subspace(x, x.group_members(g));
        GroupedMetricSpace yg = subspace(y, y.group_members(g));
        per_group[static_cast<size_t>(g)] = gromov_wasserstein(xg, yg, fast).value;
    }
    double mean = 0.0;
    for (double r : per_group) mean += r;
    mean /= static_cast<double>(k);
    return {mean, per_group};
}

SkewReport group_skew(const GroupedMetricSpace& x, const GroupedMetricSpace& y, double delta,
                      SmoothingMode mode, uint64_t seed) {
    if (!(delta > 0.0)) throw Error(Errc::nonpositive_delta, "smoothing radius must be > 0");

    SkewReport report;
    report.delta = delta;
    report.mode = mode;

    if (mode == SmoothingMode::additive) {
        report.rho_b = between_group_distance(x, y);
        auto [rw, per_group] = within_group_distance(x, y);
        report.rho_w = rw;
        report.per_group_rho = std::move(per_group);
        report.sigma = (report.rho_b + delta) / (report.rho_w + delta);
    } else {
        GroupedMetricSpace xp = perturb(x, delta, Rng::derive(seed, 0));
        GroupedMetricSpace yp = perturb(y, delta, Rng::derive(seed, 1));
        report.rho_b = between_group_distance(xp, yp);
        auto [rw, per_group] = within_group_distance(xp, yp);
        report.rho_w = rw;
        report.per_group_rho = std::move(per_group);
        if (report.rho_w > 0.0)
            report.sigma = report.rho_b / report.rho_w;
        else
            report.sigma = report.rho_b == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return report;
}

double default_smoothing_delta(const GroupedMetricSpace& x, const GroupedMetricSpace& y) {
    return 1e-3 * std::max(x.diameter(), y.diameter());
}

}  // namespace fairspace
