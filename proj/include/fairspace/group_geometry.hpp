// Between-group and within-group distances across two spaces, and the group
// skew ratio with degenerate-case smoothing.
#pragma once

#include <cstdint>

#include "fairspace/metric_space.hpp"
#include "fairspace/transport.hpp"

namespace fairspace {

enum class SmoothingMode { additive, perturb };

struct SkewReport {
    double rho_b = 0.0;
    double rho_w = 0.0;
    double delta = 0.0;
    double sigma = 1.0;
    std::vector<double> per_group_rho;
    SmoothingMode mode = SmoothingMode::additive;
};

// Pair-set distance between the two group-level spaces, divided by C(k,2).
double between_group_distance(const GroupedMetricSpace& x, const GroupedMetricSpace& y);

// Per-group pair-set distances (within-group metric only) and their mean.
std::pair<double, std::vector<double>> within_group_distance(const GroupedMetricSpace& x,
                                                             const GroupedMetricSpace& y);

// additive: sigma = (rho_b + delta) / (rho_w + delta) on the spaces as given.
// perturb: sigma = rho_b / rho_w computed on delta-perturbed copies.
SkewReport group_skew(const GroupedMetricSpace& x, const GroupedMetricSpace& y, double delta,
                      SmoothingMode mode = SmoothingMode::additive, uint64_t seed = 0);

// 1e-3 times the larger diameter; the documented default smoothing radius.
double default_smoothing_delta(const GroupedMetricSpace& x, const GroupedMetricSpace& y);

}  // namespace fairspace
