// Axiom checkers (faithful-observation, equal-groups) and the fairness /
// structural-bias / direct-discrimination / non-discrimination verdicts.
#pragma once

#include <optional>

#include "fairspace/distortion.hpp"
#include "fairspace/group_geometry.hpp"
#include "fairspace/metric_space.hpp"

namespace fairspace {

struct AxiomVerdict {
    bool holds = false;
    double epsilon_used = 0.0;
    double achieved_value = 0.0;
    // Violating witness when the axiom fails: a point pair for the distortion
    // axiom, a group pair for the equal-groups axiom.
    std::optional<std::pair<size_t, size_t>> witness;
    // Bijection-search mode also reports the weaker all-functions bound when
    // the size caps allow computing it.
    std::optional<double> all_maps_bound;
};

struct FairnessViolation {
    size_t p = 0;
    size_t q = 0;
    double d_construct = 0.0;
    double d_decision = 0.0;
};

struct FairnessVerdict {
    bool fair = true;
    double epsilon = 0.0;
    double epsilon_prime = 0.0;
    std::vector<FairnessViolation> violations;  // lexicographic by (p, q)
};

struct SkewVerdict {
    bool flagged = false;  // skew exceeds the threshold
    double threshold = 0.0;
    SkewReport skew;
};

// Distortion between construct and observed space is at most eps. With a map
// given, its distortion is checked; otherwise the bijection-search minimum.
AxiomVerdict check_wysiwyg(const GroupedMetricSpace& cs, const GroupedMetricSpace& os,
                           double eps, const SpaceMap* g = nullptr);

// All groups pairwise within eps in Wasserstein distance (strict inequality).
AxiomVerdict check_wae(const GroupedMetricSpace& cs, double eps);

struct FairnessOptions {
    ExecPolicy exec = ExecPolicy::parallel;
};

// Scans every pair: d_CS(p,q) <= eps must imply d_DS(f(p),f(q)) <= eps'.
FairnessVerdict check_fairness(const SpaceMap& composed, const GroupedMetricSpace& cs,
                               const GroupedMetricSpace& ds, double eps, double eps_prime,
                               const FairnessOptions& opts = {});

SkewVerdict check_structural_bias(const GroupedMetricSpace& cs, const GroupedMetricSpace& os,
                                  double threshold, double delta,
                                  SmoothingMode mode = SmoothingMode::additive,
                                  uint64_t seed = 0);

SkewVerdict check_direct_discrimination(const GroupedMetricSpace& os,
                                        const GroupedMetricSpace& ds, double threshold,
                                        double delta,
                                        SmoothingMode mode = SmoothingMode::additive,
                                        uint64_t seed = 0);

struct NonDiscriminationVerdict {
    bool non_discriminatory = false;
    double threshold = 0.0;
    SkewReport skew;
};

NonDiscriminationVerdict check_non_discrimination(const GroupedMetricSpace& cs,
                                                  const GroupedMetricSpace& ds, double threshold,
                                                  double delta,
                                                  SmoothingMode mode = SmoothingMode::additive,
                                                  uint64_t seed = 0);

}  // namespace fairspace
