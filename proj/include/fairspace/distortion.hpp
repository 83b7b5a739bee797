// Additive distortion of a map, and the exhaustive minimum achievable
// distortion between small spaces.
#pragma once

#include "fairspace/exec.hpp"
#include "fairspace/metric_space.hpp"

namespace fairspace {

struct DistortionReport {
    double rho = 0.0;
    size_t witness_p = 0;  // domain indices of the pair achieving the max
    size_t witness_q = 0;
};

// Exact worst-case |d_X(p,q) - d_Y(f(p), f(q))| with a witness pair.
DistortionReport map_distortion(const SpaceMap& f,
                                const GroupedMetricSpace& x,
                                const GroupedMetricSpace& y);

enum class MapClass { all_maps, bijections };

struct MinDistortionOptions {
    MapClass mode = MapClass::bijections;
    size_t size_cap = 0;  // 0 = default (6 all_maps, 8 bijections)
    ExecPolicy exec = ExecPolicy::parallel;
};

struct MinDistortionReport {
    double rho = 0.0;
    SpaceMap best;
    DistortionReport detail;
};

// Exhaustive minimum of map_distortion over |Y|^|X| functions or |X|!
// bijections. Candidates are enumerated in a fixed order and ties broken by
// the lowest candidate index, so serial and parallel scans agree exactly.
MinDistortionReport min_distortion(const GroupedMetricSpace& x,
                                   const GroupedMetricSpace& y,
                                   const MinDistortionOptions& opts = {});

}  // namespace fairspace
