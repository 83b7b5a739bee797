// Decision mechanisms: richness, individual- and group-fairness mechanism
// verification and construction, and the close-pair violation finder for
// discrete decision spaces.
#pragma once

#include "fairspace/distortion.hpp"
#include "fairspace/metric_space.hpp"

namespace fairspace {

enum class MechanismKind { ifm, gfm };

// A mechanism is a map from an observed space into a decision label space.
// Labels are points of decision_space; several individuals may share one.
struct Mechanism {
    MechanismKind kind = MechanismKind::ifm;
    GroupedMetricSpace decision_space;
    SpaceMap map;  // OS point index -> decision_space point index
};

// True iff every decision point has a non-empty preimage.
bool is_rich(const SpaceMap& f, const GroupedMetricSpace& ds);

struct MechanismVerdict {
    bool passes = false;
    bool rich = false;
    double achieved = 0.0;  // distortion (ifm) / max pairwise image-group W (gfm)
    double epsilon = 0.0;
};

// rich and map distortion <= eps.
MechanismVerdict verify_ifm(const SpaceMap& f, const GroupedMetricSpace& os,
                            const GroupedMetricSpace& ds, double eps);

// rich and all image groups pairwise within eps in Wasserstein distance,
// where group labels ride through f from the observed space.
MechanismVerdict verify_gfm(const SpaceMap& f, const GroupedMetricSpace& os,
                            const GroupedMetricSpace& ds, double eps);

// Distance-preserving score copy of the observed space: the canonical
// zero-distortion rich mechanism. Needs an embedding to copy.
Mechanism build_ifm(const GroupedMetricSpace& os);

// Group-conditional quantile alignment onto the pooled score distribution.
// Needs 1-D scores, k >= 2, every group of size >= 2. Output is verified
// against gfm_epsilon_bound before return.
Mechanism build_gfm(const GroupedMetricSpace& os);

// Guaranteed verify_gfm tolerance for build_gfm's output: 1e-9 when the
// groups collapse exactly (equal sizes, uniform measure), otherwise
// 2 * pooled diameter * max conditional point mass.
double gfm_epsilon_bound(const GroupedMetricSpace& os);

// Per-individual view of a mechanism's output: one point per observed
// individual placed at its decision label, same partition and measure.
GroupedMetricSpace decision_space_per_individual(const GroupedMetricSpace& os,
                                                 const Mechanism& mechanism,
                                                 const std::string& space_id = "ds");

struct ViolationSearchResult {
    bool found = false;
    size_t p = 0;
    size_t q = 0;
    double os_distance = 0.0;
    double ds_distance = 0.0;
    bool injective_premise = false;  // search is only guaranteed when f is injective
    double delta = 0.0;
    double delta_prime = 0.0;
    double eps = 0.0;
};

// Search for two points within delta in the observed space whose decisions
// differ; such a pair certifies (delta - eps, delta_prime)-unfairness under
// any eps-distortion construct correspondence. With the unit discrete metric
// any differing decision qualifies; for other metrics the scan requires
// decision distance > delta_prime.
ViolationSearchResult find_fairness_violation(const SpaceMap& f, const GroupedMetricSpace& os,
                                              const GroupedMetricSpace& ds, double delta,
                                              double delta_prime, double eps);

}  // namespace fairspace
