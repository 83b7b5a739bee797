// Seeded synthetic construct->observed->decision pipelines and the
// reproducible theorem experiments.
#pragma once

#include <cstdint>
#include <variant>

#include "fairspace/mechanisms.hpp"
#include "fairspace/metric_space.hpp"
#include "fairspace/worldviews.hpp"

namespace fairspace {

struct FaithfulModel {
    double delta_obs = 0.0;  // per-point shift radius; map distortion <= 2*delta_obs
};

struct BiasedModel {
    std::vector<std::vector<double>> shifts;  // one translation per group, k x dim
};

struct NoisyProxyModel {
    std::vector<std::vector<double>> mixing;  // dim x dim
    double noise = 0.0;
};

using ObservationModel = std::variant<FaithfulModel, BiasedModel, NoisyProxyModel>;

struct WorldSpec {
    size_t n_per_group = 8;
    int k = 2;
    size_t dim = 1;
    double group_separation = 0.0;  // spacing of cluster centers along axis 0
    double within_spread = 1.0;     // Gaussian scale, clipped at 3x
    ObservationModel observation_model = FaithfulModel{};
    uint64_t seed = 0;
};

void validate_spec(const WorldSpec& spec);  // throws BAD_SPEC / MODEL_MISMATCH

struct PipelineWorld {
    GroupedMetricSpace cs, os, ds;
    SpaceMap g;         // cs -> os, identity on individuals
    SpaceMap f;         // os -> ds (per-individual view), identity on individuals
    SpaceMap composed;  // cs -> ds
    Mechanism mechanism;
    WorldSpec spec;
};

// k clipped-Gaussian clusters at centers spaced by group_separation, uniform
// measure, deterministic per seed.
GroupedMetricSpace gen_construct_space(const WorldSpec& spec);

// Applies the observation model; g is the identity on individuals.
std::pair<GroupedMetricSpace, SpaceMap> observe(const GroupedMetricSpace& cs,
                                                const ObservationModel& model, uint64_t seed);

PipelineWorld make_pipeline(const WorldSpec& spec, MechanismKind kind);

// ---------------------------------------------------------------------------
// Experiments. Reports share the per-trial metric row used by the CSV output.

struct TrialMetrics {
    size_t trial = 0;
    double sigma_cs_os = 0.0;
    double sigma_os_ds = 0.0;
    double sigma_cs_ds = 0.0;
    double violations = 0.0;
    double bound = 0.0;
    double margin = 0.0;
};

struct Theorem1Config {
    size_t trials = 100;
    WorldSpec base;
    std::vector<double> deltas{0.01, 0.05, 0.1};        // observation distortion bounds
    std::vector<double> delta_primes{0.01, 0.05, 0.1};  // mechanism distortion bounds
    double eps = 0.2;
    uint64_t master_seed = 0;
};

struct Theorem1Trial {
    TrialMetrics metrics;
    double delta = 0.0, delta_prime = 0.0, eps = 0.0, eps_prime = 0.0;
    double g_distortion = 0.0, f_distortion = 0.0;
    size_t violation_count = 0;
};

struct Theorem1Report {
    std::vector<Theorem1Trial> trials;
    size_t total_violations = 0;
    bool all_assertions_held = false;
};

Theorem1Report run_theorem1_experiment(const Theorem1Config& config);

struct Theorem2Config {
    size_t trials = 100;
    size_t n = 50;            // observed points; decision space has n labels
    double delta = 0.1;       // closeness threshold in the observed space
    double delta_prime = 0.5;
    double eps = 0.01;
    uint64_t master_seed = 0;
};

struct Theorem2Trial {
    TrialMetrics metrics;
    bool found = false;
    size_t p = 0, q = 0;
    double os_distance = 0.0;
    bool verified = false;  // returned pair re-checked against the raw definition
};

struct Theorem2Report {
    std::vector<Theorem2Trial> trials;
    size_t found_count = 0;
    bool all_assertions_held = false;
};

Theorem2Report run_theorem2_experiment(const Theorem2Config& config);

struct GfmTheoremConfig {
    size_t trials = 100;
    WorldSpec base;            // separation ~ 0 so the equal-groups axiom holds
    double eps = 0.0;          // equal-groups tolerance, verified per trial
    double eps_prime = 1e-9;   // group mechanism tolerance, verified per trial
    double delta = 0.0;        // smoothing radius; 0 = 1e-3 x diameter per trial
    double bias_shift = 0.0;   // per-group translation magnitude in the observation
    uint64_t master_seed = 0;
};

struct GfmTheoremTrial {
    TrialMetrics metrics;
    double wae_achieved = 0.0;
    bool wae_holds = false;
    bool gfm_passes = false;
    double sigma = 0.0, bound = 0.0;
    bool within_bound = false;
    bool additive_adjustment = false;  // max(eps, eps') == 0 edge case
};

struct GfmTheoremReport {
    std::vector<GfmTheoremTrial> trials;
    size_t breaches = 0;
    bool all_assertions_held = false;
};

GfmTheoremReport run_gfm_theorem_experiment(const GfmTheoremConfig& config);

struct ConflictConfig {
    // Scenario (a): separated groups, biased observation pushing them apart.
    double separation = 3.0;
    double shift = 5.0;
    // Scenario (b): separated groups, near-faithful observation.
    double wys_separation = 5.0;
    double delta_obs = 0.01;
    double eps = 1.0;
    size_t n_per_group = 8;
    double within_spread = 0.15;
    double delta = 0.0;  // smoothing radius; 0 = shared per-scenario default
    uint64_t seed = 7;
};

struct ConflictReport {
    bool degenerate = false;  // separation 0: mechanisms agree, nothing to compare
    // Scenario (a)
    SkewReport skew_ifm, skew_gfm;
    double sigma_ratio = 0.0;
    bool ifm_discriminates_more = false;
    // Scenario (b)
    double eps = 0.0, eps_prime = 0.0;
    FairnessVerdict gfm_fairness, ifm_fairness;
    bool gfm_unfair_ifm_fair = false;
    std::vector<TrialMetrics> rows;  // CSV rows: a/ifm, a/gfm, b/ifm, b/gfm
    bool all_assertions_held = false;
};

ConflictReport run_conflict_experiment(const ConflictConfig& config);

}  // namespace fairspace
